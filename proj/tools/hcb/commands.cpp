#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "hcboson/fluctuations.hpp"
#include "hcboson/lattice_oracle.hpp"
#include "hcboson/mean_field.hpp"
#include "json.hpp"

namespace hcb::cli {
namespace {

using nlohmann::ordered_json;

/// A printed value: the formatted text plus how to encode it in JSON.
struct Cell {
  enum class Kind { number, text, boolean, empty } kind = Kind::empty;
  std::string text;

  static Cell num(double v) { return {Kind::number, format_number(v)}; }
  static Cell str(std::string_view s) { return {Kind::text, std::string(s)}; }
  static Cell flag(bool b) { return {Kind::boolean, b ? "true" : "false"}; }
  static Cell none() { return {}; }

  ordered_json to_json() const {
    switch (kind) {
      case Kind::number:
        if (text == "inf" || text == "-inf" || text == "nan") return text;
        return std::stod(text);
      case Kind::text:
        return text;
      case Kind::boolean:
        return text == "true";
      case Kind::empty:
        return nullptr;
    }
    return nullptr;
  }
};

using Record = std::vector<std::pair<std::string, Cell>>;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_csv(std::ostream& os, const std::vector<Record>& rows) {
  if (rows.empty()) return;
  for (std::size_t k = 0; k < rows[0].size(); ++k) os << (k ? "," : "") << rows[0][k].first;
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_field(row[k].second.text);
    os << "\n";
  }
}

ordered_json record_json(const Record& r) {
  ordered_json j = ordered_json::object();
  for (const auto& [key, cell] : r) j[key] = cell.to_json();
  return j;
}

struct Document {
  Record params;
  std::vector<Record> rows;
  bool single = false;  // results is an object rather than an array
  Record residuals;
  ordered_json extra_results;  // merged into a single-object result

  void write(std::ostream& os, const std::string& format) const {
    if (format == "csv") {
      write_csv(os, rows);
      return;
    }
    ordered_json j;
    j["params"] = record_json(params);
    if (single) {
      ordered_json r = rows.empty() ? ordered_json::object() : record_json(rows[0]);
      for (const auto& [k, v] : extra_results.items()) r[k] = v;
      j["results"] = r;
    } else {
      j["results"] = ordered_json::array();
      for (const auto& row : rows) j["results"].push_back(record_json(row));
    }
    j["residuals"] = record_json(residuals);
    os << j.dump(2) << "\n";
  }
};

double parse_value(const std::string& token) {
  std::string t = token;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + token + "'");
  }
  if (used != t.size()) throw InvalidArgument("not a number: '" + token + "'");
  return v;
}

InverseTemperature temperature_value(std::optional<double> beta, std::optional<double> temperature) {
  if (beta && temperature) throw InvalidArgument("give either --beta or --temperature, not both");
  if (temperature) return InverseTemperature::from_temperature(*temperature);
  if (!beta) throw InvalidArgument("--beta or --temperature is required");
  if (std::isinf(*beta) && *beta > 0) return InverseTemperature::infinite();
  return InverseTemperature::finite(*beta);
}

Cell beta_cell(const InverseTemperature& b) { return b.is_infinite() ? Cell::str("inf") : Cell::num(b.value()); }

struct Common {
  double t = -1.0;
  double U = 0.0;
  std::optional<std::string> beta;
  std::optional<std::string> temperature;
  std::string format;
  std::string out_path;
};

InverseTemperature temperature_from(const Common& c) {
  std::optional<double> b, T;
  if (c.beta) b = parse_value(*c.beta);
  if (c.temperature) T = parse_value(*c.temperature);
  return temperature_value(b, T);
}

Record params_record(const ModelParams& p) {
  return {{"t", Cell::num(p.t)}, {"U", Cell::num(p.U)}, {"beta", beta_cell(p.beta)}};
}

// ---------------------------------------------------------------------------

Document cmd_solve(const Common& c) {
  const ModelParams p(c.t, c.U, temperature_from(c));
  const auto sol = solve_gap(p);
  Document d;
  d.single = true;
  d.params = params_record(p);
  std::string roots;
  ordered_json fp = ordered_json::array();
  for (double eta : sol.fixed_points) {
    roots += (roots.empty() ? "" : ";") + format_number(eta);
    fp.push_back(std::stod(format_number(eta)));
  }
  d.rows.push_back({{"lambda_mod", Cell::num(sol.lambda_mod)},
                    {"eta", Cell::num(sol.selected_eta)},
                    {"rho0", Cell::num(sol.rho0)},
                    {"phase", Cell::str(to_string(sol.phase))},
                    {"regime", Cell::str(to_string(sol.regime))},
                    {"free_energy", Cell::num(sol.free_energy)},
                    {"fixed_points", Cell::str(roots)}});
  d.extra_results["fixed_points"] = fp;
  d.residuals = {{"gap", Cell::num(sol.residual)}};
  return d;
}

struct ScanRow {
  Record record;
  bool failed = false;
  double residual = 0.0;
};

ScanRow scan_cell(double t, double U, InverseTemperature beta) {
  ScanRow row;
  Record& r = row.record;
  r = {{"U", Cell::num(U)}, {"beta", beta_cell(beta)}};
  try {
    const ModelParams p(t, U, beta);
    const auto sol = solve_gap(p);
    const auto xi = plasmon_frequencies(p, sol.lambda_mod);
    r.push_back({"lambda_mod", Cell::num(sol.lambda_mod)});
    r.push_back({"rho0", Cell::num(sol.rho0)});
    r.push_back({"eta", Cell::num(sol.selected_eta)});
    r.push_back({"xi_plus", Cell::num(xi.xi_plus)});
    r.push_back({"xi_minus", Cell::num(xi.xi_minus)});
    r.push_back({"hbar_plus", Cell::num(quantisation_parameter(p, sol.lambda_mod, FrequencyClass::xi_plus))});
    r.push_back({"hbar_minus", Cell::num(quantisation_parameter(p, sol.lambda_mod, FrequencyClass::xi_minus))});
    r.push_back({"phase", Cell::str(to_string(sol.phase))});
    r.push_back({"error", Cell::str("")});
    row.residual = sol.residual;
  } catch (const Error& e) {
    for (const char* key : {"lambda_mod", "rho0", "eta", "xi_plus", "xi_minus", "hbar_plus", "hbar_minus", "phase"})
      r.push_back({key, Cell::none()});
    r.push_back({"error", Cell::str(e.what())});
    row.failed = true;
  }
  return row;
}

Document cmd_scan(const Common& c, const std::string& u_list, unsigned threads) {
  const std::vector<double> us = parse_list(u_list);
  std::vector<InverseTemperature> betas;
  if (c.beta && c.temperature) throw InvalidArgument("give either --beta or --temperature, not both");
  if (c.temperature) {
    for (double T : parse_list(*c.temperature)) betas.push_back(InverseTemperature::from_temperature(T));
  } else if (c.beta) {
    for (double b : parse_list(*c.beta)) betas.push_back(temperature_value(b, std::nullopt));
  } else {
    throw InvalidArgument("--beta or --temperature is required");
  }

  const std::size_t n = us.size() * betas.size();
  std::vector<ScanRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      rows[k] = scan_cell(c.t, us[k / betas.size()], betas[k % betas.size()]);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < count; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  Document d;
  std::string u_text, b_text;
  for (double u : us) u_text += (u_text.empty() ? "" : ";") + format_number(u);
  for (const auto& b : betas) b_text += (b_text.empty() ? "" : ";") + beta_cell(b).text;
  d.params = {{"t", Cell::num(c.t)}, {"U", Cell::str(u_text)}, {"beta", Cell::str(b_text)}};
  double worst = 0.0;
  std::size_t failed = 0;
  for (auto& row : rows) {
    d.rows.push_back(std::move(row.record));
    worst = std::max(worst, row.residual);
    failed += row.failed;
  }
  d.residuals = {{"max_gap", Cell::num(worst)}, {"failed_rows", Cell::num(static_cast<double>(failed))}};
  if (failed == n) throw InvalidArgument("every scan row failed: " + d.rows.front().back().second.text);
  return d;
}

Document cmd_critical(double t, std::optional<double> U) {
  Document d;
  d.single = true;
  const double kappa = tricritical_kappa();
  if (!U) {
    d.params = {};
    d.rows.push_back({{"kappa", Cell::num(kappa)}});
    d.residuals = {{"kappa_equation", Cell::num(std::abs(kappa_equation_residual(kappa)))}};
    return d;
  }
  const ModelParams p(t, *U, InverseTemperature::infinite());
  const auto b = phase_boundary(p);
  d.params = {{"t", Cell::num(t)}, {"U", Cell::num(*U)}};
  d.rows.push_back({{"beta_c", b.beta_c ? Cell::num(*b.beta_c) : Cell::str("undefined")},
                    {"kappa", Cell::num(kappa)},
                    {"case_a_possible", Cell::flag(b.case_a_possible)},
                    {"second_order_safe", Cell::flag(b.second_order_safe)},
                    {"ground_state_condensed", Cell::flag(b.ground_state_condensed)},
                    {"regime", Cell::str(to_string(b.regime))}});
  d.residuals = {{"kappa_equation", Cell::num(std::abs(kappa_equation_residual(kappa)))}};
  return d;
}

struct Undefined : Error {
  using Error::Error;
};

Document cmd_fluct(const Common& c) {
  const InverseTemperature beta = temperature_from(c);
  if (beta.is_infinite()) throw InvalidArgument("fluct needs a finite temperature");
  const ModelParams p(c.t, c.U, beta);
  const auto sol = solve_gap(p);
  if (sol.phase != Phase::condensed) {
    throw Undefined("no condensate at this point (lambda = 0); the fluctuation pairs are degenerate");
  }
  const auto a = analyze_fluctuations(p, sol.lambda_mod);
  const auto table = independence_matrix(a.pairs, a.rho);

  Document d;
  d.params = params_record(p);
  double worst_ccr = 0.0, worst_dyn = 0.0;
  for (const auto& pair : a.pairs) {
    const double ccr = std::abs(ccr_parameter(pair, a.rho) - expected_ccr(pair));
    worst_ccr = std::max(worst_ccr, ccr);
    worst_dyn = std::max(worst_dyn, commutator_dynamics_check(pair, a.h));
    const bool plus = pair.info.frequency == FrequencyClass::xi_plus;
    d.rows.push_back({{"pair", Cell::str(pair.info.label)},
                      {"generator", Cell::str(pair.info.generator == Generator::q_plus ? "Q+" : "Q-")},
                      {"frequency_class", Cell::str(plus ? "xi_plus" : "xi_minus")},
                      {"frequency", Cell::num(pair.frequency)},
                      {"hbar", Cell::num(pair.hbar)},
                      {"variance", Cell::num(pair.variance)},
                      {"n", Cell::num(pair.n)},
                      {"p_meaning", Cell::str(pair.info.p_meaning)},
                      {"max_cross_moment", Cell::num(table.max_cross_moment)}});
  }
  d.residuals = {{"max_cross_moment", Cell::num(table.max_cross_moment)},
                 {"ccr", Cell::num(worst_ccr)},
                 {"dynamics", Cell::num(worst_dyn)}};
  return d;
}

Document cmd_oracle(const Common& c, int n_max, bool allow_large) {
  const InverseTemperature beta = temperature_from(c);
  if (beta.is_infinite()) throw InvalidArgument("oracle needs a finite temperature");
  const ModelParams p(c.t, c.U, beta);
  LatticeSpec top{n_max, p, allow_large};
  top.validate();
  const double rho0 = solve_gap(p).rho0;

  Document d;
  d.params = params_record(p);
  d.params.push_back({"n_max", Cell::num(n_max)});
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto obs = observe(LatticeSpec{n, p, allow_large});
    const auto& r = obs.symmetry_residuals;
    worst = std::max({worst, r.at("type_exchange"), r.at("particle_hole"), r.at("gauge")});
    d.rows.push_back({{"N", Cell::num(n)},
                      {"zero_mode_density", Cell::num(obs.zero_mode_density)},
                      {"sigma_z_per_site", Cell::num(obs.sigma_z_per_site)},
                      {"energy_density", Cell::num(obs.energy_density)},
                      {"res_type_exchange", Cell::num(r.at("type_exchange"))},
                      {"res_particle_hole", Cell::num(r.at("particle_hole"))},
                      {"res_gauge", Cell::num(r.at("gauge"))},
                      {"mean_field_rho0", Cell::num(rho0)}});
  }
  d.residuals = {{"max_symmetry", Cell::num(worst)}};
  return d;
}

void add_model_options(CLI::App* app, Common& c, bool lists) {
  app->add_option("--t", c.t, "hopping amplitude (must be < 0 for condensation)")->capture_default_str();
  if (!lists) app->add_option("--U", c.U, "on-site coupling U >= 0")->capture_default_str();
  auto* b = app->add_option("--beta", c.beta, lists ? "inverse temperatures (list, 'inf' for T = 0)"
                                                     : "inverse temperature ('inf' for T = 0)");
  auto* T = app->add_option("--temperature", c.temperature, lists ? "temperatures (list)" : "temperature");
  b->excludes(T);
  app->add_option("--out", c.out_path, "write output to this file");
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find(':') == std::string::npos) {
      out.push_back(parse_value(item));
      continue;
    }
    std::vector<std::string> parts;
    std::stringstream rs(item);
    std::string part;
    while (std::getline(rs, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw InvalidArgument("range must be lo:hi:n, got '" + item + "'");
    const double lo = parse_value(parts[0]);
    const double hi = parse_value(parts[1]);
    const double count = parse_value(parts[2]);
    if (!(count >= 1.0) || count != std::floor(count)) throw InvalidArgument("range count must be a positive integer");
    const int n = static_cast<int>(count);
    for (int k = 0; k < n; ++k) out.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-field analysis of two-type hard-core bosons", "hcb"};
  app.require_subcommand(1);

  Common solve_opts, scan_opts, fluct_opts, oracle_opts;
  solve_opts.format = "json";
  scan_opts.format = fluct_opts.format = oracle_opts.format = "csv";

  auto* solve = app.add_subcommand("solve", "solve the gap equation at one point");
  add_model_options(solve, solve_opts, false);
  solve->add_option("--format", solve_opts.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  std::string u_list = "0";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* scan = app.add_subcommand("scan", "scan a (U, beta) grid at fixed t");
  add_model_options(scan, scan_opts, true);
  scan->add_option("--U", u_list, "coupling values (list or lo:hi:n)")->capture_default_str();
  scan->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  scan->add_option("--format", scan_opts.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  double crit_t = -1.0;
  std::optional<double> crit_u;
  std::string crit_format = "json", crit_out;
  auto* critical = app.add_subcommand("critical", "critical temperature, tricritical coupling and regime flags");
  critical->add_option("--t", crit_t)->capture_default_str();
  critical->add_option("--U", crit_u, "omit to print kappa only");
  critical->add_option("--format", crit_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  critical->add_option("--out", crit_out);

  auto* fluct = app.add_subcommand("fluct", "fluctuation pairs at a condensed point");
  add_model_options(fluct, fluct_opts, false);
  fluct->add_option("--format", fluct_opts.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  int n_max = LatticeSpec::kDefaultCap;
  bool allow_large = false;
  auto* orc = app.add_subcommand("oracle", "exact diagonalization on N = 1..n-max sites");
  add_model_options(orc, oracle_opts, false);
  orc->add_option("--n-max", n_max)->capture_default_str();
  orc->add_flag("--allow-large", allow_large, "permit N = 6 (dimension 4096, several hundred MB)");
  orc->add_option("--format", oracle_opts.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::invalid_input;
  }

  try {
    Document doc;
    std::string format, path;
    if (solve->parsed()) {
      doc = cmd_solve(solve_opts);
      format = solve_opts.format, path = solve_opts.out_path;
    } else if (scan->parsed()) {
      doc = cmd_scan(scan_opts, u_list, threads);
      format = scan_opts.format, path = scan_opts.out_path;
    } else if (critical->parsed()) {
      doc = cmd_critical(crit_t, crit_u);
      format = crit_format, path = crit_out;
    } else if (fluct->parsed()) {
      doc = cmd_fluct(fluct_opts);
      format = fluct_opts.format, path = fluct_opts.out_path;
    } else {
      doc = cmd_oracle(oracle_opts, n_max, allow_large);
      format = oracle_opts.format, path = oracle_opts.out_path;
    }
    if (path.empty()) {
      doc.write(out, format);
    } else {
      std::ofstream file(path, std::ios::binary);
      if (!file) throw InvalidArgument("cannot open " + path + " for writing");
      doc.write(file, format);
    }
    return ExitCode::ok;
  } catch (const Undefined& e) {
    err << "hcb: " << e.what() << "\n";
    return ExitCode::undefined_at_point;
  } catch (const DegenerateBoundary& e) {
    err << "hcb: " << e.what() << "\n";
    return ExitCode::undefined_at_point;
  } catch (const Error& e) {
    err << "hcb: " << e.what() << "\n";
    return ExitCode::invalid_input;
  }
}

}  // namespace hcb::cli
