#include "qgraph/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace qgraph {

namespace fs = std::filesystem;

namespace {

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: /") + key + ": " + e.what());
  }
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = get_field<T>(j, key);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  s += '\n';
  return s;
}

/// Keeps free text inside one CSV cell.
std::string sanitize(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r' || c == '"'; }, ';');
  return s;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_file(const fs::path& p) {
  try {
    return nlohmann::json::parse(read_file(p));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

nlohmann::json matrix_excerpt(const Eigen::MatrixXd& m, int n) {
  nlohmann::json rows = nlohmann::json::array();
  const auto k = std::min<Eigen::Index>(n, m.rows());
  for (Eigen::Index i = 0; i < k; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < k; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

bool wants(const RunConfig& c, const std::string& fmt) {
  return std::find(c.formats.begin(), c.formats.end(), fmt) != c.formats.end();
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

// --- config ---------------------------------------------------------------------------

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["graph_file"] = graph_file;
  j["topology"] = topology;
  j["samples"] = samples;
  j["seed"] = seed;
  j["states"] = states;
  j["threads"] = threads;
  j["max_failure_rate"] = max_failure_rate;
  j["output_dir"] = output_dir;
  j["formats"] = formats;
  j["scan_kind"] = scan_kind;
  j["middle"] = middle;
  j["shortest"] = shortest;
  j["angle_steps"] = angle_steps;
  j["lengths"] = lengths;
  j["swept"] = swept;
  j["wire_length"] = wire_length;
  j["g"] = g;
  j["s0"] = s0;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& in) {
  if (!in.is_object()) throw ConfigError("config: top level must be an object");
  const nlohmann::json& j = in.contains("config") ? in["config"] : in;
  if (!j.is_object()) throw ConfigError("config: /config must be an object");
  static const std::set<std::string> known{"command",     "graph_file", "topology", "samples",   "seed",
                                           "states",      "threads",    "max_failure_rate", "output_dir",
                                           "formats",     "scan_kind",  "middle",   "shortest",  "angle_steps",
                                           "lengths",     "swept",      "wire_length", "g",      "s0"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("config: /" + key + ": unknown key");
  }
  RunConfig c;
  read(j, "command", c.command);
  read(j, "graph_file", c.graph_file);
  read(j, "topology", c.topology);
  read(j, "samples", c.samples);
  read(j, "seed", c.seed);
  read(j, "states", c.states);
  read(j, "threads", c.threads);
  read(j, "max_failure_rate", c.max_failure_rate);
  read(j, "output_dir", c.output_dir);
  read(j, "formats", c.formats);
  read(j, "scan_kind", c.scan_kind);
  read(j, "middle", c.middle);
  read(j, "shortest", c.shortest);
  read(j, "angle_steps", c.angle_steps);
  read(j, "lengths", c.lengths);
  read(j, "swept", c.swept);
  read(j, "wire_length", c.wire_length);
  read(j, "g", c.g);
  read(j, "s0", c.s0);
  return c;
}

RunConfig RunConfig::load(const std::string& path) { return from_json(parse_file(path)); }

void RunConfig::validate() const {
  static const std::set<std::string> commands{"solve", "ensemble", "scan", "report"};
  if (!commands.count(command)) throw ConfigError("config: /command: expected solve, ensemble, scan or report");
  if (states < 3) throw ConfigError("config: /states: need at least 3 retained states");
  if (threads < 1) throw ConfigError("config: /threads: must be at least 1");
  if (!(max_failure_rate >= 0.0 && max_failure_rate <= 1.0)) {
    throw ConfigError("config: /max_failure_rate: must lie in [0, 1]");
  }
  for (const auto& f : formats) {
    if (f != "csv" && f != "json") throw ConfigError("config: /formats: unknown format '" + f + "'");
  }
  if (command == "solve" && graph_file.empty()) throw ConfigError("config: /graph_file: required for solve");
  if (command == "ensemble") {
    const auto c = topology_from_string(topology);
    if (!c || *c == TopologyClass::custom) throw ConfigError("config: /topology: unknown class '" + topology + "'");
    if (samples < 0) throw ConfigError("config: /samples: must be non-negative");
  }
  if (command == "scan") {
    if (scan_kind != "prong" && scan_kind != "angle" && scan_kind != "delta") {
      throw ConfigError("config: /scan_kind: expected prong, angle or delta");
    }
    if (scan_kind == "angle" && lengths.size() < 3) throw ConfigError("config: /lengths: need at least three prongs");
    if (scan_kind == "delta") {
      if (!(wire_length > 0.0)) throw ConfigError("config: /wire_length: must be positive");
      for (double s : s0) {
        if (!(s > 0.0 && s < wire_length)) throw ConfigError("config: /s0: positions must lie inside the wire");
      }
    }
    if (scan_kind == "prong") {
      for (double v : middle) {
        if (!(v > 0.0 && v <= 1.0)) throw ConfigError("config: /middle: lengths must lie in (0, 1]");
      }
      for (double v : shortest) {
        if (!(v > 0.0 && v <= 1.0)) throw ConfigError("config: /shortest: lengths must lie in (0, 1]");
      }
    }
  }
}

fs::path RunConfig::run_dir() const {
  if (!output_dir.empty()) return output_dir;
  const char* env = std::getenv("QGRAPH_OUTPUT_DIR");
  const fs::path base = env && *env ? fs::path(env) : fs::path("qgraph-runs");
  std::string label = command;
  if (command == "solve") label += "-" + fs::path(graph_file).stem().string();
  if (command == "ensemble") label += "-" + topology + "-seed" + std::to_string(seed) + "-n" + std::to_string(samples);
  if (command == "scan") label += "-" + scan_kind;
  return base / label;
}

// --- formatting --------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_sig3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) prepare_dir(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::vector<std::string> record_columns(std::size_t vertices, std::size_t edges) {
  std::vector<std::string> c{"id", "ok"};
  for (std::size_t i = 0; i < vertices; ++i) {
    c.push_back("x" + std::to_string(i));
    c.push_back("y" + std::to_string(i));
  }
  for (std::size_t i = 0; i < vertices; ++i) c.push_back("potential" + std::to_string(i));
  for (std::size_t i = 0; i < edges; ++i) c.push_back("length" + std::to_string(i));
  for (std::size_t i = 0; i < edges; ++i) c.push_back("angle" + std::to_string(i));
  for (const auto& t : TensorSet::csv_columns()) c.push_back(t);
  for (const char* t : {"e_ratio", "x_ratio", "beta_3l", "extreme", "sum_rule_00"}) c.emplace_back(t);
  for (int i = 0; i < 10; ++i) c.push_back("k" + std::to_string(i));
  c.emplace_back("error");
  return c;
}

std::string records_csv(const std::vector<EnsembleRecord>& records) {
  std::size_t nv = 0;
  std::size_t ne = 0;
  for (const auto& r : records) {
    nv = std::max(nv, r.positions.size());
    ne = std::max(ne, r.edge_lengths.size());
  }
  std::string out = csv_line(record_columns(nv, ne));
  const std::size_t ntensor = TensorSet::csv_columns().size();
  for (const auto& r : records) {
    std::vector<std::string> row{std::to_string(r.id), r.ok ? "1" : "0"};
    for (std::size_t i = 0; i < nv; ++i) {
      row.push_back(i < r.positions.size() ? format_double(r.positions[i].x) : "");
      row.push_back(i < r.positions.size() ? format_double(r.positions[i].y) : "");
    }
    for (std::size_t i = 0; i < nv; ++i) row.push_back(i < r.potentials.size() ? format_double(r.potentials[i]) : "");
    for (std::size_t i = 0; i < ne; ++i) row.push_back(i < r.edge_lengths.size() ? format_double(r.edge_lengths[i]) : "");
    for (std::size_t i = 0; i < ne; ++i) row.push_back(i < r.edge_angles.size() ? format_double(r.edge_angles[i]) : "");
    if (r.ok) {
      for (double v : r.tensors.csv_values()) row.push_back(format_double(v));
      for (double v : {r.three.e_ratio, r.three.x_ratio, r.three.beta_3l, r.three.extreme, r.sum_rule}) {
        row.push_back(format_double(v));
      }
    } else {
      row.insert(row.end(), ntensor + 5, "");
    }
    for (std::size_t i = 0; i < 10; ++i) row.push_back(i < r.wavenumbers.size() ? format_double(r.wavenumbers[i]) : "");
    row.push_back(sanitize(r.error));
    out += csv_line(row);
  }
  return out;
}

std::string traces_csv(const std::vector<SpectrumTrace>& traces) {
  std::vector<std::string> head{"rank", "id", "beta_xxx_max"};
  for (int i = 0; i < 10; ++i) head.push_back("k" + std::to_string(i));
  std::string out = csv_line(head);
  for (std::size_t r = 0; r < traces.size(); ++r) {
    const auto& t = traces[r];
    std::vector<std::string> row{std::to_string(r), std::to_string(t.id), format_double(t.beta)};
    for (std::size_t i = 0; i < 10; ++i) row.push_back(i < t.wavenumbers.size() ? format_double(t.wavenumbers[i]) : "");
    out += csv_line(row);
  }
  return out;
}

std::string prong_csv(const std::vector<ProngCell>& cells) {
  std::string out = csv_line({"middle", "short", "beta_xxx_max", "angle_middle", "angle_short"});
  for (const auto& c : cells) {
    out += csv_line({format_double(c.middle), format_double(c.shortest), format_double(c.beta),
                     format_double(c.angles.size() > 1 ? c.angles[1] : 0.0),
                     format_double(c.angles.size() > 2 ? c.angles[2] : 0.0)});
  }
  return out;
}

std::string angle_csv(const std::vector<AnglePoint>& points) {
  std::string out = csv_line({"angle", "beta_xxx_max"});
  for (const auto& p : points) out += csv_line({format_double(p.angle), format_double(p.beta)});
  return out;
}

std::string delta_csv(const std::vector<DeltaPoint>& points) {
  std::vector<std::string> head{"g", "s0", "ok", "beta", "beta_3l", "extreme", "e_ratio", "x_ratio"};
  for (int k = 3; k <= 7; ++k) head.push_back("sum_rule_00_k" + std::to_string(k));
  std::string out = csv_line(head);
  for (const auto& p : points) {
    std::vector<std::string> row{format_double(p.g),       format_double(p.s0),      p.ok ? "1" : "0",
                                 format_double(p.beta),    format_double(p.beta_3l), format_double(p.extreme),
                                 format_double(p.e_ratio), format_double(p.x_ratio)};
    for (std::size_t i = 0; i < 5; ++i) row.push_back(i < p.sum_rule.size() ? format_double(p.sum_rule[i]) : "");
    out += csv_line(row);
  }
  return out;
}

nlohmann::json manifest_json(const RunConfig& config) {
  nlohmann::json j;
  j["program"] = "qgraph";
  j["version"] = kVersion;
  j["seed"] = config.seed;
  j["config"] = config.to_json();
  return j;
}

// --- solve -----------------------------------------------------------------------------

nlohmann::json solve_report(const GraphSpec& g, int states) {
  SpectralOptions so;
  so.states = states;
  const auto sol = solve_states(g, so);
  const auto t = transition_moments(g, sol);
  const auto ts = compute_tensors(t, states);
  nlohmann::json j;
  j["graph"] = to_json(g);
  j["class"] = std::string(to_string(g.topology_class()));
  nlohmann::json spec = nlohmann::json::array();
  double worst_flux = 0.0;
  for (const auto& st : sol.states) {
    spec.push_back({{"k", st.bound ? -st.k : st.k},
                    {"energy", st.energy},
                    {"bound", st.bound},
                    {"family", to_string(st.family)},
                    {"multiplicity", st.multiplicity}});
    for (const auto& v : g.vertices()) worst_flux = std::max(worst_flux, std::abs(flux_residual(g, st, v.id)));
  }
  j["spectrum"] = spec;
  j["moments"] = {{"x", matrix_excerpt(t.x(), 5)}, {"y", matrix_excerpt(t.y(), 5)}};
  j["tensors"] = ts.to_json();
  const auto d = three_level(t, ts.beta_best.angle);
  j["three_level"] = {{"e_ratio", d.e_ratio}, {"x_ratio", d.x_ratio}, {"beta_3l", d.beta_3l}, {"extreme", d.extreme}};
  const auto rules = sum_rule_diagnostics(t, {{0, 0}, {0, 1}, {1, 1}}, {ts.states});
  nlohmann::json sr = nlohmann::json::array();
  for (const auto& e : rules.entries) sr.push_back({{"n", e.n}, {"m", e.m}, {"k", e.k}, {"value", e.combined}});
  j["sum_rules"] = sr;
  j["max_flux_residual"] = worst_flux;
  return j;
}

std::string solve_summary(const nlohmann::json& r) {
  std::ostringstream s;
  const auto& t = r.at("tensors");
  s << "class            " << r.at("class").get<std::string>() << "\n";
  s << "lowest k         ";
  const auto& spec = r.at("spectrum");
  for (std::size_t i = 0; i < spec.size() && i < 6; ++i) {
    s << format_sig3(spec[i].at("k").get<double>());
    if (spec[i].at("family").get<std::string>() == "zero") s << "(zero mode)";
    s << ' ';
  }
  s << "\n";
  s << "beta_xxx         " << format_sig3(t.at("beta").at("xxx").get<double>()) << "\n";
  s << "beta_xxx(phi*)   " << format_sig3(t.at("beta_xxx_max").get<double>()) << " at phi* = "
    << format_sig3(t.at("phi_star").get<double>()) << "\n";
  s << "beta_norm        " << format_sig3(t.at("beta_norm").get<double>()) << "\n";
  s << "gamma_xxxx range " << format_sig3(t.at("gamma_xxxx_min").get<double>()) << " to "
    << format_sig3(t.at("gamma_xxxx_max").get<double>()) << "\n";
  s << "gamma_norm       " << format_sig3(t.at("gamma_norm").get<double>()) << "\n";
  const auto& d = r.at("three_level");
  s << "E, X             " << format_sig3(d.at("e_ratio").get<double>()) << ", "
    << format_sig3(d.at("x_ratio").get<double>()) << "\n";
  s << "three-level beta " << format_sig3(d.at("beta_3l").get<double>()) << " (extreme "
    << format_sig3(d.at("extreme").get<double>()) << ")\n";
  for (const auto& e : r.at("sum_rules")) {
    s << "S_" << e.at("n").get<int>() << e.at("m").get<int>() << "(" << e.at("k").get<int>() << ")"
      << std::string(e.at("k").get<int>() < 10 ? 9 : 8, ' ') << format_sig3(e.at("value").get<double>()) << "\n";
  }
  s << "states           " << t.at("states").get<int>() << (t.at("converged").get<bool>() ? "" : " (not converged)")
    << "\n";
  return s.str();
}

RunResult run_solve(const RunConfig& config) {
  config.validate();
  GraphSpec g;
  try {
    g = load_graph(config.graph_file);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  RunResult res;
  try {
    res.summary = solve_report(g, config.states);
  } catch (const std::exception& e) {
    throw SolverBudgetError(std::string("solve failed: ") + e.what());
  }
  res.dir = config.run_dir();
  prepare_dir(res.dir);
  write_atomic(res.dir / "manifest.json", manifest_json(config).dump(2) + "\n");
  write_atomic(res.dir / "report.json", res.summary.dump(2) + "\n");
  return res;
}

// --- ensemble ------------------------------------------------------------------------------

RunResult run_ensemble(const RunConfig& config, const std::function<void(int)>& progress) {
  config.validate();
  const TopologyClass c = *topology_from_string(config.topology);
  EnsembleOptions o;
  o.samples = config.samples;
  o.seed = config.seed;
  o.states = config.states;
  o.threads = config.threads;
  const auto records = sample_topology(c, o, progress);
  const auto summary = summarize(c, records);

  RunResult res;
  res.dir = config.run_dir();
  prepare_dir(res.dir);
  write_atomic(res.dir / "manifest.json", manifest_json(config).dump(2) + "\n");
  if (wants(config, "csv")) write_atomic(res.dir / "records.csv", records_csv(records));
  if (wants(config, "json")) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : records) {
      nlohmann::json j{{"id", r.id}, {"ok", r.ok}, {"error", r.error}, {"sum_rule_00", r.sum_rule}};
      if (r.ok) j["tensors"] = r.tensors.to_json();
      all.push_back(std::move(j));
    }
    write_atomic(res.dir / "records.json", all.dump() + "\n");
  }
  write_atomic(res.dir / "traces.csv", traces_csv(spectrum_vs_beta(records)));
  res.summary = summary.to_json();
  write_atomic(res.dir / "summary.json", res.summary.dump(2) + "\n");
  if (summary.samples > 0 && summary.failure_rate() > config.max_failure_rate) {
    throw SolverBudgetError(std::to_string(summary.failed) + " of " + std::to_string(summary.samples) +
                            " samples failed (budget " + format_sig3(config.max_failure_rate) + ")");
  }
  return res;
}

// --- scans -----------------------------------------------------------------------------

RunResult run_scan(const RunConfig& config) {
  config.validate();
  RunResult res;
  res.dir = config.run_dir();
  prepare_dir(res.dir);
  write_atomic(res.dir / "manifest.json", manifest_json(config).dump(2) + "\n");
  nlohmann::json s;
  s["kind"] = config.scan_kind;
  if (config.scan_kind == "prong") {
    const auto middle = config.middle.empty() ? linspace(0.05, 1.0, 20) : config.middle;
    const auto shortest = config.shortest.empty() ? linspace(0.01, 0.35, 18) : config.shortest;
    const auto cells = prong_scan_3star(middle, shortest, config.states, config.angle_steps);
    write_atomic(res.dir / "grid.csv", prong_csv(cells));
    const auto best = std::max_element(cells.begin(), cells.end(),
                                       [](const ProngCell& a, const ProngCell& b) { return a.beta < b.beta; });
    if (best != cells.end()) {
      s["peak"] = {{"middle", best->middle}, {"short", best->shortest}, {"beta", best->beta}, {"angles", best->angles}};
    }
  } else if (config.scan_kind == "angle") {
    const auto swept = config.swept.empty() ? linspace(0.0, 2.0 * std::numbers::pi, 73) : config.swept;
    const auto pts = angle_scan(config.lengths, swept, config.states, 72, config.seed);
    write_atomic(res.dir / "trace.csv", angle_csv(pts));
    const auto best = std::max_element(pts.begin(), pts.end(),
                                       [](const AnglePoint& a, const AnglePoint& b) { return a.beta < b.beta; });
    if (best != pts.end()) s["peak"] = {{"angle", best->angle}, {"beta", best->beta}};
  } else {
    const auto g = config.g.empty() ? linspace(0.0, 20.0, 41) : config.g;
    const auto s0 = config.s0.empty() ? linspace(0.02 * config.wire_length, 0.98 * config.wire_length, 49) : config.s0;
    const auto pts = delta_wire_scan(config.wire_length, g, s0, config.states);
    write_atomic(res.dir / "delta.csv", delta_csv(pts));
    const DeltaPoint* best = nullptr;
    int failed = 0;
    for (const auto& p : pts) {
      if (!p.ok) {
        ++failed;
        continue;
      }
      if (!best || p.beta > best->beta) best = &p;
    }
    s["failed"] = failed;
    if (best) {
      s["peak"] = {{"g", best->g},           {"s0", best->s0},           {"beta", best->beta},
                   {"beta_3l", best->beta_3l}, {"extreme", best->extreme}, {"sum_rule_00", best->sum_rule}};
    }
  }
  res.summary = s;
  write_atomic(res.dir / "summary.json", s.dump(2) + "\n");
  return res;
}

// --- report ------------------------------------------------------------------------------

std::vector<ReportRow> collect_report(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("report: no such run directory: " + dir.string());
  std::vector<fs::path> runs;
  if (fs::exists(dir / "manifest.json")) {
    runs.push_back(dir);
  } else {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_directory() && fs::exists(e.path() / "manifest.json")) runs.push_back(e.path());
    }
  }
  std::sort(runs.begin(), runs.end());
  std::vector<ReportRow> rows;
  std::vector<std::string> partial;
  for (const auto& r : runs) {
    const auto manifest = parse_file(r / "manifest.json");
    const auto cfg = RunConfig::from_json(manifest);
    if (cfg.command != "ensemble") continue;
    if (!fs::exists(r / "summary.json")) {
      partial.push_back(r.filename().string());
      continue;
    }
    const auto j = parse_file(r / "summary.json");
    ReportRow row;
    row.run = r.filename().string();
    try {
      row.summary = EnsembleSummary::from_json(j);
    } catch (const std::exception& e) {
      throw ConfigError("report: " + (r / "summary.json").string() + ": " + e.what());
    }
    if (row.summary.samples - row.summary.failed <= 0) {
      throw ConfigError("report: run " + row.run + " has no solved samples (empty ensemble)");
    }
    rows.push_back(std::move(row));
  }
  if (!partial.empty()) {
    std::string msg = "report: incomplete runs without summary.json:";
    for (const auto& p : partial) msg += " " + p;
    throw ConfigError(msg);
  }
  if (rows.empty()) throw ConfigError("report: no ensemble runs under " + dir.string());
  const auto& order = all_topology_classes();
  auto rank = [&](TopologyClass c) { return std::find(order.begin(), order.end(), c) - order.begin(); };
  std::stable_sort(rows.begin(), rows.end(), [&](const ReportRow& a, const ReportRow& b) {
    if (a.summary.topology != b.summary.topology) return rank(a.summary.topology) < rank(b.summary.topology);
    return a.run < b.run;
  });
  return rows;
}

std::string format_report(const std::vector<ReportRow>& rows) {
  std::ostringstream s;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %8s %7s %10s %11s  %s\n", "class", "samples", "failed", "beta_norm",
                "|beta_xxx|", "gamma_xxxx");
  s << line;
  for (const auto& r : rows) {
    const auto& m = r.summary;
    const std::string range = format_sig3(m.gamma_min) + " to " + format_sig3(m.gamma_max);
    std::snprintf(line, sizeof line, "%-24s %8d %7d %10s %11s  %s\n", std::string(to_string(m.topology)).c_str(),
                  m.samples, m.failed, format_sig3(m.max_beta_norm).c_str(), format_sig3(m.max_beta_xxx).c_str(),
                  range.c_str());
    s << line;
  }
  return s.str();
}

nlohmann::json report_json(const std::vector<ReportRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    auto e = r.summary.to_json();
    e["run"] = r.run;
    j.push_back(std::move(e));
  }
  return j;
}

}  // namespace qgraph
