#include "hawkes/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hawkes/reparam.hpp"

namespace hawkes {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed " + what + ": '" + s + "'");
  }
}

Matrix matrix_from_json(const json& rows, std::size_t dims, const std::string& what) {
  if (!rows.is_array() || rows.size() != dims) {
    throw std::runtime_error(what + " must be a " + std::to_string(dims) + "x" +
                             std::to_string(dims) + " array");
  }
  Matrix out(dims);
  for (std::size_t i = 0; i < dims; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != dims) {
      throw std::runtime_error(what + " row has wrong length");
    }
    for (std::size_t j = 0; j < dims; ++j) out(i, j) = row[j].get<double>();
  }
  return out;
}

void write_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

}  // namespace

ModelParams RunConfig::Model::params() const {
  ModelParams p;
  p.mu = mu;
  p.k = kstar_to_k(k_star);
  p.beta_diag = beta_diag;
  p.beta_off = beta_off;
  return p;
}

RunConfig load_run_config(const std::string& path) {
  auto in = open_input(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  if (!doc.contains("version") || doc["version"].get<int>() != 1) {
    throw std::runtime_error("config must declare \"version\": 1");
  }

  RunConfig cfg;
  const auto& model = doc.at("model");
  cfg.model.dims = model.at("dims").get<std::size_t>();
  if (cfg.model.dims == 0) throw std::runtime_error("model.dims must be positive");
  cfg.model.mu = model.at("mu").get<std::vector<double>>();
  if (cfg.model.mu.size() != cfg.model.dims) {
    throw std::runtime_error("model.mu length must equal model.dims");
  }
  const bool has_k = model.contains("k");
  const bool has_kstar = model.contains("kstar");
  if (has_k == has_kstar) {
    throw std::runtime_error("model must contain exactly one of k / kstar");
  }
  if (has_kstar) {
    cfg.model.k_star = matrix_from_json(model["kstar"], cfg.model.dims, "model.kstar");
  } else {
    cfg.model.k_star = k_to_kstar(matrix_from_json(model["k"], cfg.model.dims, "model.k"));
  }
  cfg.model.beta_diag = model.at("beta_diag").get<double>();
  cfg.model.beta_off = model.at("beta_off").get<double>();

  if (doc.contains("sim")) {
    const auto& sim = doc["sim"];
    cfg.sim.t_max = sim.at("t_max").get<double>();
    if (sim.contains("seed")) cfg.sim.seed = sim["seed"].get<std::uint64_t>();
    if (sim.contains("replicates")) cfg.sim.replicates = sim["replicates"].get<std::size_t>();
    if (sim.contains("max_events")) cfg.sim.max_events = sim["max_events"].get<std::size_t>();
  }
  if (doc.contains("fit")) {
    const auto& fit = doc["fit"];
    if (fit.contains("prior")) {
      const std::string p = fit["prior"].get<std::string>();
      if (p == "normal") {
        cfg.fit.prior = KstarPrior::kNormal;
      } else if (p == "horseshoe") {
        cfg.fit.prior = KstarPrior::kHorseshoe;
      } else {
        throw std::runtime_error("fit.prior must be 'normal' or 'horseshoe'");
      }
    }
    if (fit.contains("chains")) cfg.fit.chains = fit["chains"].get<std::size_t>();
    if (fit.contains("warmup")) cfg.fit.warmup = fit["warmup"].get<std::size_t>();
    if (fit.contains("draws")) cfg.fit.draws = fit["draws"].get<std::size_t>();
    if (fit.contains("thin")) cfg.fit.thin = fit["thin"].get<std::size_t>();
    if (fit.contains("seed")) cfg.fit.seed = fit["seed"].get<std::uint64_t>();
  }
  if (doc.contains("io")) {
    const auto& io = doc["io"];
    if (io.contains("events")) cfg.io.events = io["events"].get<std::string>();
    if (io.contains("branching")) cfg.io.branching = io["branching"].get<std::string>();
    if (io.contains("draws")) cfg.io.draws = io["draws"].get<std::string>();
    if (io.contains("histogram")) cfg.io.histogram = io["histogram"].get<std::string>();
  }
  return cfg;
}

void write_events_csv(const std::string& path, const EventData& data) {
  auto out = open_output(path);
  out << "dimension,time\n";
  // Pooled time order with the dimension as tie-break, matching the
  // simulation's global ordering.
  std::vector<std::pair<double, std::size_t>> pooled;
  pooled.reserve(data.total_count());
  for (std::size_t m = 0; m < data.dims(); ++m) {
    for (double t : data.times[m]) pooled.push_back({t, m});
  }
  std::stable_sort(pooled.begin(), pooled.end());
  for (const auto& [t, m] : pooled) {
    out << (m + 1) << ',';
    write_double(out, t);
    out << '\n';
  }
}

EventData read_events_csv(const std::string& path, std::size_t dims, double t_max) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"dimension", "time"}) {
    throw std::runtime_error("event CSV must start with header 'dimension,time'");
  }
  EventData data;
  data.t_max = t_max;
  data.times.assign(dims, {});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw std::runtime_error("event CSV row needs 2 fields");
    const double dim_val = parse_double(fields[0], "dimension");
    const double t = parse_double(fields[1], "time");
    const auto dim = static_cast<std::size_t>(dim_val);
    if (dim_val != std::floor(dim_val) || dim < 1 || dim > dims) {
      throw std::runtime_error("dimension out of range in event CSV");
    }
    data.times[dim - 1].push_back(t);
  }
  for (auto& row : data.times) std::sort(row.begin(), row.end());
  data.validate();
  return data;
}

void write_branching_csv(const std::string& path, const BranchingRecord& record) {
  auto out = open_output(path);
  out << "event_id,dimension,time,parent_id\n";
  for (std::size_t i = 0; i < record.size(); ++i) {
    const std::size_t parent =
        record.parent[i] == BranchingRecord::kImmigrant ? 0 : record.parent[i] + 1;
    out << (i + 1) << ',' << (record.dims[i] + 1) << ',';
    write_double(out, record.times[i]);
    out << ',' << parent << '\n';
  }
}

void write_draws_csv(const std::string& path,
                     const std::vector<std::vector<PosteriorSample>>& chains,
                     bool include_xi) {
  if (chains.empty() || chains.front().empty()) {
    throw std::invalid_argument("no draws to write");
  }
  const std::size_t dims = chains.front().front().mu.size();
  const auto names = parameter_names(dims, include_xi);
  auto out = open_output(path);
  out << "chain,draw";
  for (const auto& n : names) out << ',' << n;
  out << ",lp\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i = 0; i < chains[c].size(); ++i) {
      out << (c + 1) << ',' << (i + 1);
      for (double v : flatten_sample(chains[c][i], include_xi)) {
        out << ',';
        write_double(out, v);
      }
      out << ',';
      write_double(out, chains[c][i].log_posterior);
      out << '\n';
    }
  }
}

DrawsTable read_draws_csv(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("draws CSV is empty");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "chain" || header[1] != "draw") {
    throw std::runtime_error("draws CSV must start with 'chain,draw,...'");
  }
  DrawsTable table;
  table.names.assign(header.begin() + 2, header.end());

  std::map<std::size_t, std::vector<std::vector<double>>> by_chain;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("draws CSV row width mismatch");
    }
    const auto chain = static_cast<std::size_t>(parse_double(fields[0], "chain"));
    std::vector<double> row;
    row.reserve(fields.size() - 2);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      row.push_back(parse_double(fields[i], "draw value"));
    }
    by_chain[chain].push_back(std::move(row));
  }
  for (auto& [chain, rows] : by_chain) table.chains.push_back(std::move(rows));
  return table;
}

Matrix read_matrix_csv(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split_csv_line(line)) row.push_back(parse_double(f, "matrix entry"));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("matrix CSV is empty");
  const std::size_t m = rows.size();
  Matrix out(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) throw std::runtime_error("matrix CSV must be square");
    for (std::size_t j = 0; j < m; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

void write_histogram_csv(const std::string& path,
                         const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& pooled_draws) {
  if (names.size() != pooled_draws.size()) {
    throw std::invalid_argument("names and draws must align");
  }
  auto out = open_output(path);
  out << "parameter,bin_lo,bin_hi,count\n";
  for (std::size_t p = 0; p < names.size(); ++p) {
    std::vector<double> x = pooled_draws[p];
    if (x.empty()) continue;
    std::sort(x.begin(), x.end());
    const double lo = x.front();
    const double hi = x.back();
    const double n = static_cast<double>(x.size());
    const double q1 = x[static_cast<std::size_t>(0.25 * (n - 1))];
    const double q3 = x[static_cast<std::size_t>(0.75 * (n - 1))];
    // Freedman-Diaconis width; degenerate spreads collapse to one bin.
    double width = 2.0 * (q3 - q1) * std::pow(n, -1.0 / 3.0);
    std::size_t bins = 1;
    if (width > 0.0 && hi > lo) {
      bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
      bins = std::min<std::size_t>(bins, 10000);
      width = (hi - lo) / static_cast<double>(bins);
    } else {
      width = 1.0;
    }
    std::vector<std::size_t> counts(bins, 0);
    for (double v : x) {
      std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - lo) / width) : 0;
      if (b >= bins) b = bins - 1;
      ++counts[b];
    }
    for (std::size_t b = 0; b < bins; ++b) {
      out << names[p] << ',';
      write_double(out, lo + width * static_cast<double>(b));
      out << ',';
      write_double(out, lo + width * static_cast<double>(b + 1));
      out << ',' << counts[b] << '\n';
    }
  }
}

}  // namespace hawkes
