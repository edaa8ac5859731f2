// lilfields batch experiment runner.
//
// Subcommands: maxnorm, bound, compare, verify, orlicz, hermite, sets.
// Each reads a single JSON config document (--config), applies the
// --seed/--out/--threads/--strict-serial overrides, runs the experiment and
// writes CSV or JSON with the fully resolved config echoed for provenance.
// Exit codes: 0 success, 2 validation failure, 3 numeric failure, 64 usage.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lilfields/bounds.hpp"
#include "lilfields/chaos.hpp"
#include "lilfields/devcheck.hpp"
#include "lilfields/errors.hpp"
#include "lilfields/fields.hpp"
#include "lilfields/io.hpp"
#include "lilfields/maxfun.hpp"
#include "lilfields/projections.hpp"
#include "lilfields/scalars.hpp"
#include "lilfields/sets.hpp"

namespace lf = lilfields;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 64;

struct CliOverrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  bool strict_serial = false;
};

lf::InnovationSpec parse_innovation(const json& j) {
  const std::string tag = j.at("tag").get<std::string>();
  if (tag == "standard_normal") return lf::InnovationSpec::standard_normal();
  if (tag == "rademacher") return lf::InnovationSpec::rademacher();
  if (tag == "centered_uniform") return lf::InnovationSpec::centered_uniform();
  if (tag == "two_point") return lf::InnovationSpec::two_point(j.at("q").get<double>());
  throw std::invalid_argument("unknown innovation tag '" + tag + "'");
}

json innovation_to_json(const lf::InnovationSpec& innov) {
  json j;
  switch (innov.tag()) {
    case lf::InnovationTag::standard_normal:
      j["tag"] = "standard_normal";
      break;
    case lf::InnovationTag::rademacher:
      j["tag"] = "rademacher";
      break;
    case lf::InnovationTag::centered_uniform:
      j["tag"] = "centered_uniform";
      break;
    case lf::InnovationTag::two_point:
      j["tag"] = "two_point";
      j["q"] = innov.two_point_q();
      break;
  }
  return j;
}

lf::CoefficientField parse_coeffs(int d, const json& j) {
  std::map<lf::LatticeIndex, double> entries;
  for (const auto& entry : j) {
    entries[lf::LatticeIndex(entry.at("i").get<std::vector<lf::Coord>>())] =
        entry.at("a").get<double>();
  }
  return lf::CoefficientField(d, std::move(entries));
}

lf::GSpec parse_g(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "abs_power") return lf::GSpec::abs_power(j.at("param").get<double>());
  if (kind == "signed_power") return lf::GSpec::signed_power(j.at("param").get<double>());
  if (kind == "clip") return lf::GSpec::clip(j.at("lo").get<double>(), j.at("hi").get<double>());
  if (kind == "soft_threshold") return lf::GSpec::soft_threshold(j.at("param").get<double>());
  throw std::invalid_argument("unknown g kind '" + kind + "'");
}

lf::FieldModel parse_model(const json& j, std::uint64_t seed) {
  const std::string type = j.at("type").get<std::string>();
  const int d = j.at("d").get<int>();
  if (type == "iid") return lf::IidModel(d, parse_innovation(j.at("innovation")));
  if (type == "linear") {
    return lf::LinearModel(parse_coeffs(d, j.at("coeffs")), parse_innovation(j.at("innovation")));
  }
  if (type == "holder_of_linear") {
    auto coeffs = parse_coeffs(d, j.at("coeffs"));
    const auto innov = parse_innovation(j.at("innovation"));
    const auto g = parse_g(j.at("g"));
    const double gamma = j.at("gamma").get<double>();
    if (j.contains("centering")) {
      return lf::HolderOfLinearModel(std::move(coeffs), innov, g, gamma,
                                     j.at("centering").get<double>());
    }
    return lf::make_holder_model(std::move(coeffs), innov, g, gamma, 200000,
                                 lf::derive_seed(seed, 0x63656e74));
  }
  if (type == "volterra") {
    std::map<lf::PairCoefficientField::Key, double> entries;
    for (const auto& entry : j.at("pair_coeffs")) {
      entries[{lf::LatticeIndex(entry.at("s1").get<std::vector<lf::Coord>>()),
               lf::LatticeIndex(entry.at("s2").get<std::vector<lf::Coord>>())}] =
          entry.at("a").get<double>();
    }
    return lf::VolterraModel(lf::PairCoefficientField(d, std::move(entries)),
                             parse_innovation(j.at("innovation")));
  }
  if (type == "hermite_functional") {
    return lf::HermiteFunctionalModel(parse_coeffs(d, j.at("coeffs")),
                                      j.at("hermite_c").get<std::vector<double>>());
  }
  throw std::invalid_argument("unknown model type '" + type + "'");
}

lf::McConfig parse_mc(const json& j, std::uint64_t seed) {
  lf::McConfig mc;
  mc.seed = seed;
  if (j.contains("reps")) mc.reps = j.at("reps").get<std::int64_t>();
  if (j.contains("n_max")) mc.n_max = j.at("n_max").get<std::int64_t>();
  if (j.contains("p")) mc.p = j.at("p").get<double>();
  if (mc.reps < 1) throw std::invalid_argument("mc.reps must be >= 1");
  if (mc.n_max < 1) throw std::invalid_argument("mc.n_max must be >= 1");
  return mc;
}

lf::ShellKind parse_kind(const std::string& kind) {
  if (kind == "linear") return lf::ShellKind::linear;
  if (kind == "holder") return lf::ShellKind::holder;
  if (kind == "hermite") return lf::ShellKind::hermite;
  if (kind == "volterra") return lf::ShellKind::volterra;
  if (kind == "phys_dep") return lf::ShellKind::phys_dep;
  throw std::invalid_argument("unknown bound kind '" + kind + "'");
}

lf::WeightProfileTag parse_profile(const std::string& profile) {
  if (profile == "rectangles") return lf::WeightProfileTag::rect_d_half;
  if (profile == "set_sequence") return lf::WeightProfileTag::union_d_logp;
  throw std::invalid_argument("unknown weight profile '" + profile + "'");
}

// Resolved runtime settings shared by every experiment.
struct Resolved {
  json config;  // full config with defaults filled in
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::optional<std::string> out;
  int threads = 1;
  bool strict_serial = false;
};

Resolved resolve(const json& raw, const std::string& experiment, const CliOverrides& cli) {
  Resolved r;
  r.config = raw;
  if (!r.config.contains("schema")) r.config["schema"] = 1;
  if (r.config.at("schema").get<int>() != 1) {
    throw std::invalid_argument("unsupported config schema version");
  }
  if (!r.config.contains("experiment")) r.config["experiment"] = experiment;
  if (r.config.at("experiment").get<std::string>() != experiment) {
    throw std::invalid_argument("config experiment tag '" +
                                r.config.at("experiment").get<std::string>() +
                                "' does not match subcommand '" + experiment + "'");
  }
  if (cli.seed) r.config["seed"] = *cli.seed;
  if (!r.config.contains("seed")) {
    throw std::invalid_argument("seed is mandatory (config field 'seed' or --seed)");
  }
  r.seed = r.config.at("seed").get<std::uint64_t>();
  if (cli.out) r.config["out"] = *cli.out;
  if (r.config.contains("out")) r.out = r.config.at("out").get<std::string>();
  if (r.config.contains("format")) r.format = r.config.at("format").get<std::string>();
  r.config["format"] = r.format;
  if (r.format != "csv" && r.format != "json") {
    throw std::invalid_argument("format must be 'csv' or 'json'");
  }
  r.strict_serial = cli.strict_serial || r.config.value("strict_serial", false);
  r.config["strict_serial"] = r.strict_serial;
  int threads = 0;
  if (cli.threads) {
    threads = *cli.threads;
  } else if (r.config.contains("threads")) {
    threads = r.config.at("threads").get<int>();
  } else if (const char* env = std::getenv("LILFIELDS_THREADS")) {
    threads = std::atoi(env);
  }
  if (threads <= 0) threads = lf::ParallelContext::hardware_threads();
  if (r.strict_serial) threads = 1;
  r.config["threads"] = threads;
  r.threads = threads;
  return r;
}

void emit(const Resolved& r, const std::string& body) {
  if (r.out) {
    std::ofstream os(*r.out, std::ios::binary);  // binary: LF endings everywhere
    if (!os) throw std::runtime_error("cannot open output file " + *r.out);
    os << body;
    if (!os) throw std::runtime_error("write to " + *r.out + " failed");
  } else {
    std::cout << body;
  }
}

std::string csv_preamble(const Resolved& r) {
  std::string out = "# ";
  out += lf::kVersion;
  out += "\n# config ";
  out += r.config.dump();
  out += '\n';
  return out;
}

json json_envelope(const Resolved& r) {
  json j;
  j["version"] = std::string(lf::kVersion);
  j["config"] = r.config;
  return j;
}

// ---------------------------------------------------------------- maxnorm

int run_maxnorm(const Resolved& r) {
  const lf::FieldModel model = parse_model(r.config.at("model"), r.seed);
  const lf::McConfig mc = parse_mc(r.config.value("mc", json::object()), r.seed);
  const lf::ParallelContext par(r.threads);
  const int d = lf::model_dim(model);
  const std::string mode_name = r.config.value("mode", std::string("full"));
  if (mode_name != "full" && mode_name != "dyadic") {
    throw std::invalid_argument("maxnorm mode must be 'full' or 'dyadic'");
  }
  const lf::RectSupMode mode =
      mode_name == "full" ? lf::RectSupMode::full : lf::RectSupMode::dyadic;

  std::vector<lf::MaxEstimate> rows;
  std::vector<std::int64_t> row_n;
  if (r.config.contains("exponents")) {
    const auto exponents = r.config.at("exponents").get<std::vector<int>>();
    rows = lf::saturation_curve(model, mc.p, exponents, mc.reps, mc.seed, par);
    for (const auto& est : rows) row_n.push_back(est.n_max);
  } else {
    const lf::Rect block(lf::LatticeIndex::ones(d), lf::LatticeIndex::constant(d, mc.n_max));
    auto sampler = [&](std::uint64_t rep_seed) {
      return lf::maximal_function_rect(lf::simulate_block(model, block, rep_seed), mode);
    };
    lf::MaxEstimate est = lf::estimate_lp_norm(sampler, mc.p, mc.reps, mc.seed, par);
    est.n_max = mc.n_max;
    rows.push_back(est);
    row_n.push_back(mc.n_max);
  }
  if (r.config.contains("export_grid")) {
    const lf::Rect block(lf::LatticeIndex::ones(d), lf::LatticeIndex::constant(d, mc.n_max));
    lf::write_grid_binary(lf::simulate_block(model, block, lf::derive_seed(mc.seed, 0)),
                          r.config.at("export_grid").get<std::string>());
  }

  if (r.format == "json") {
    json out = json_envelope(r);
    out["results"] = json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out["results"].push_back({{"model", lf::model_tag(model)},
                                {"d", d},
                                {"p", mc.p},
                                {"n_max", row_n[k]},
                                {"reps", rows[k].reps},
                                {"estimate", rows[k].lp_estimate},
                                {"se", rows[k].se},
                                {"seed", mc.seed}});
    }
    emit(r, out.dump(2) + "\n");
    return kExitOk;
  }
  std::string body = csv_preamble(r);
  body += "model,d,p,n_max,reps,estimate,se,seed\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    body += lf::model_tag(model) + ',' + std::to_string(d) + ',' + lf::format_double(mc.p) + ',' +
            std::to_string(row_n[k]) + ',' + std::to_string(rows[k].reps) + ',' +
            lf::format_double(rows[k].lp_estimate) + ',' + lf::format_double(rows[k].se) + ',' +
            std::to_string(mc.seed) + '\n';
  }
  emit(r, body);
  return kExitOk;
}

// ------------------------------------------------------------------ bound

lf::BoundReport compute_bound(const Resolved& r, const lf::FieldModel& model,
                              const lf::ParallelContext& par) {
  const int d = lf::model_dim(model);
  const lf::ShellKind kind = parse_kind(r.config.at("kind").get<std::string>());
  const lf::WeightProfileTag profile_tag =
      parse_profile(r.config.value("profile", std::string("rectangles")));
  const double p = r.config.value("p", 1.5);
  const lf::WeightProfile weights(profile_tag, d, p);
  lf::ShellContext ctx;
  ctx.profile = profile_tag;
  ctx.quad_nodes = r.config.value("quad_nodes", 128);
  lf::DependenceProfile dep;
  if (kind == lf::ShellKind::phys_dep) {
    const lf::McConfig mc = parse_mc(r.config.value("mc", json::object()), r.seed);
    const double rr = profile_tag == lf::WeightProfileTag::rect_d_half ? d - 1.0 : 0.0;
    dep = lf::dependence_profile(model, rr, mc, par);
    ctx.dependence = &dep;
  }
  return lf::model_bound_series(model, kind, weights, ctx);
}

int run_bound(const Resolved& r) {
  const lf::FieldModel model = parse_model(r.config.at("model"), r.seed);
  const lf::ParallelContext par(r.threads);
  const lf::BoundReport report = compute_bound(r, model, par);
  if (r.format == "json") {
    json out = json_envelope(r);
    out["results"] = json::parse(lf::to_json_string(report));
    emit(r, out.dump(2) + "\n");
    return kExitOk;
  }
  std::string body = csv_preamble(r);
  body += "kind,profile,j,weight,shell_norm,term,total,tail_flag,constant_free\n";
  for (const lf::BoundTerm& t : report.terms) {
    body += report.kind + ',' + report.profile + ',' + std::to_string(t.j) + ',' +
            lf::format_double(t.weight) + ',' + lf::format_double(t.shell_norm) + ',' +
            lf::format_double(t.term) + ',' + lf::format_double(report.total) + ',' +
            (report.tail_flag ? "1" : "0") + ',' + (report.constant_free ? "1" : "0") + '\n';
  }
  emit(r, body);
  return kExitOk;
}

// ---------------------------------------------------------------- compare

int run_compare(const Resolved& r) {
  const lf::FieldModel model = parse_model(r.config.at("model"), r.seed);
  const lf::McConfig mc = parse_mc(r.config.value("mc", json::object()), r.seed);
  const lf::ParallelContext par(r.threads);
  const int d = lf::model_dim(model);
  const lf::Rect block(lf::LatticeIndex::ones(d), lf::LatticeIndex::constant(d, mc.n_max));
  auto sampler = [&](std::uint64_t rep_seed) {
    return lf::maximal_function_rect(lf::simulate_block(model, block, rep_seed),
                                     lf::RectSupMode::full);
  };
  const lf::MaxEstimate empirical = lf::estimate_lp_norm(sampler, mc.p, mc.reps, mc.seed, par);
  const lf::BoundReport bound = compute_bound(r, model, par);
  const double ratio = bound.total > 0.0 ? empirical.lp_estimate / bound.total : 0.0;

  if (r.format == "json") {
    json out = json_envelope(r);
    out["results"] = {{"model", lf::model_tag(model)},
                      {"d", d},
                      {"p", mc.p},
                      {"n_max", mc.n_max},
                      {"reps", empirical.reps},
                      {"empirical_lp", empirical.lp_estimate},
                      {"se", empirical.se},
                      {"bound_series", bound.total},
                      {"ratio_unitless", ratio},
                      {"constant_free", bound.constant_free}};
    emit(r, out.dump(2) + "\n");
    return kExitOk;
  }
  std::string body = csv_preamble(r);
  body += "model,d,p,n_max,reps,empirical_lp,se,bound_series,ratio_unitless\n";
  body += lf::model_tag(model) + ',' + std::to_string(d) + ',' + lf::format_double(mc.p) + ',' +
          std::to_string(mc.n_max) + ',' + std::to_string(empirical.reps) + ',' +
          lf::format_double(empirical.lp_estimate) + ',' + lf::format_double(empirical.se) + ',' +
          lf::format_double(bound.total) + ',' + lf::format_double(ratio) + '\n';
  emit(r, body);
  return kExitOk;
}

// ----------------------------------------------------------------- verify

int run_verify(const Resolved& r) {
  const lf::ParallelContext par(r.threads);
  const json suites = r.config.value("suites", json::object());

  const json bt = suites.value("bercu_touati", json::object());
  std::vector<double> bt_grid = bt.value("x_grid", std::vector<double>{5, 10, 20, 30, 40, 50});
  const int bt_n = bt.value("n", 100);
  const lf::VerifyReport bercu = lf::check_bercu_touati(
      parse_innovation(bt.value("innovation", json{{"tag", "standard_normal"}})), bt_n, bt_grid,
      bt.value("y", static_cast<double>(bt_n)), bt.value("reps", std::int64_t{100000}),
      lf::derive_seed(r.seed, 1), par);

  const json fr = suites.value("freedman", json::object());
  std::vector<double> fr_grid = fr.value("x_grid", std::vector<double>{4, 8, 12, 16, 24, 32});
  const int fr_n = fr.value("n", 64);
  const lf::VerifyReport freedman = lf::check_freedman(
      parse_innovation(fr.value("innovation", json{{"tag", "rademacher"}})), fr_n, fr_grid,
      fr.value("y", static_cast<double>(fr_n)), fr.value("reps", std::int64_t{100000}),
      lf::derive_seed(r.seed, 2), par);

  const json er = suites.value("ergodic", json::object());
  const lf::FieldModel er_model =
      er.contains("model") ? parse_model(er.at("model"), r.seed)
                           : lf::FieldModel(lf::IidModel(2, lf::InnovationSpec::standard_normal()));
  std::vector<double> er_grid = er.value("y_grid", std::vector<double>{1, 2, 3, 4});
  const lf::VerifyReport ergodic = lf::check_maximal_ergodic(
      er_model,
      er.value("transform", std::string("absolute_value")) == "square"
          ? lf::SiteTransform::square
          : lf::SiteTransform::absolute_value,
      er.value("n_max", std::int64_t{64}), er_grid, er.value("reps", std::int64_t{10000}),
      er.value("tail_reps", std::int64_t{100000}), lf::derive_seed(r.seed, 3), par);

  const bool all_pass = bercu.all_pass && freedman.all_pass && ergodic.all_pass;
  if (r.format == "json") {
    json out = json_envelope(r);
    out["results"] = {{"all_pass", all_pass},
                      {"suites", json::array({json::parse(lf::to_json_string(bercu)),
                                              json::parse(lf::to_json_string(freedman)),
                                              json::parse(lf::to_json_string(ergodic))})}};
    emit(r, out.dump(2) + "\n");
    return all_pass ? kExitOk : kExitNumeric;
  }
  std::string body = csv_preamble(r);
  body += "name,threshold,empirical,se,bound,pass\n";
  for (const lf::VerifyReport* rep : {&bercu, &freedman, &ergodic}) {
    std::string csv = lf::to_csv_string(*rep);
    body += csv.substr(csv.find('\n') + 1);  // drop the per-report header
  }
  emit(r, body);
  return all_pass ? kExitOk : kExitNumeric;
}

// ----------------------------------------------------------------- orlicz

int run_orlicz(const Resolved& r) {
  const double p = r.config.value("p", 2.0);
  const double rr = r.config.value("r", 0.0);
  const lf::OrliczParams params(p, rr);
  double value = 0.0;
  std::string method;
  if (r.config.contains("samples_file")) {
    std::ifstream is(r.config.at("samples_file").get<std::string>());
    if (!is) {
      throw std::invalid_argument("cannot open samples file " +
                                  r.config.at("samples_file").get<std::string>());
    }
    lf::SampleSet samples;
    samples.provenance = r.config.at("samples_file").get<std::string>();
    double v = 0.0;
    while (is >> v) samples.values.push_back(v);
    if (samples.values.empty()) throw std::invalid_argument("samples file holds no values");
    value = lf::orlicz_norm_samples(samples, params, r.config.value("tol", 1e-10));
    method = "samples";
  } else if (r.config.contains("distribution")) {
    value = lf::orlicz_norm_quadrature(parse_innovation(r.config.at("distribution")), params,
                                       r.config.value("nodes", 128));
    method = "quadrature";
  } else {
    throw std::invalid_argument("orlicz experiment needs 'samples_file' or 'distribution'");
  }
  if (r.format == "json") {
    json out = json_envelope(r);
    out["results"] = {{"p", p}, {"r", rr}, {"method", method}, {"norm", value}};
    emit(r, out.dump(2) + "\n");
    return kExitOk;
  }
  std::string body = csv_preamble(r);
  body += "p,r,method,norm\n";
  body += lf::format_double(p) + ',' + lf::format_double(rr) + ',' + method + ',' +
          lf::format_double(value) + '\n';
  emit(r, body);
  return kExitOk;
}

// ---------------------------------------------------------------- hermite

int run_hermite(const Resolved& r) {
  const json fj = r.config.at("f");
  const std::string type = fj.at("type").get<std::string>();
  std::function<double(double)> f;
  if (type == "hermite") {
    const int q = fj.at("q").get<int>();
    f = [q](double x) { return lf::hermite_eval(q, x); };
  } else if (type == "poly") {
    const auto coeffs = fj.at("coeffs").get<std::vector<double>>();
    f = [coeffs](double x) {
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
      return acc;
    };
  } else if (type == "g") {
    const lf::GSpec g = parse_g(fj.at("g"));
    f = [g](double x) { return g(x); };
  } else {
    throw std::invalid_argument("unknown f type '" + type + "' (hermite|poly|g)");
  }
  const int Q = r.config.value("Q", 20);
  const int nodes = r.config.value("nodes", 128);
  const int d = r.config.value("d", 1);
  const lf::HermiteCoeffs coeffs = lf::hermite_coeffs(f, Q, nodes);
  const lf::SeriesConstant rect = lf::series_constant(coeffs, d, lf::SumProfile::rectangles);
  const lf::SeriesConstant sets = lf::series_constant(coeffs, d, lf::SumProfile::set_sequence);

  if (r.format == "json") {
    json out = json_envelope(r);
    out["results"] = {{"c0", coeffs.c0},
                      {"c", coeffs.c},
                      {"precision_warning", coeffs.precision_warning},
                      {"series_rectangles", rect.value},
                      {"series_rectangles_tail_flag", rect.tail_flag},
                      {"series_set_sequence", sets.value},
                      {"series_set_sequence_tail_flag", sets.tail_flag}};
    emit(r, out.dump(2) + "\n");
    return kExitOk;
  }
  std::string body = csv_preamble(r);
  body += "q,c_q\n";
  body += "0," + lf::format_double(coeffs.c0) + '\n';
  for (int q = 1; q <= coeffs.order(); ++q) {
    body += std::to_string(q) + ',' + lf::format_double(coeffs.cq(q)) + '\n';
  }
  body += "# series_rectangles " + lf::format_double(rect.value) +
          (rect.tail_flag ? " tail_flag" : "") + '\n';
  body += "# series_set_sequence " + lf::format_double(sets.value) +
          (sets.tail_flag ? " tail_flag" : "") + '\n';
  emit(r, body);
  return kExitOk;
}

// ------------------------------------------------------------------- sets

int run_sets(const Resolved& r) {
  const std::string action = r.config.at("action").get<std::string>();
  json results;
  if (action == "geometric") {
    const lf::SetSequence seq =
        lf::geometric_union_sequence(r.config.at("d").get<int>(), r.config.at("a").get<double>(),
                                     r.config.at("count").get<int>());
    results["cards"] = seq.cards;
    results["certificate"] = {{"ok", seq.certificate.ok},
                              {"delta_best", seq.certificate.delta_best},
                              {"c_sqrt", seq.certificate.c_sqrt},
                              {"c_linear", seq.certificate.c_linear}};
    results["regions"] = json::array();
    for (const lf::Region& region : seq.regions) {
      results["regions"].push_back(
          json::parse(lf::to_json_string(std::get<lf::RectUnion>(region))));
    }
  } else if (action == "validate") {
    const auto cards = r.config.at("cards").get<std::vector<std::int64_t>>();
    const int horizon = r.config.value("horizon", static_cast<int>(cards.size()));
    const lf::GrowthCheck check =
        lf::validate_growth(cards, horizon, r.config.value("allow_reindex", false));
    results = {{"ok", check.ok},
               {"delta_best", check.delta_best},
               {"c_sqrt", check.c_sqrt},
               {"c_linear", check.c_linear},
               {"failure_index", check.failure_index},
               {"reindex_offset", check.reindex_offset},
               {"reason", check.reason}};
  } else if (action == "residues") {
    const lf::RectUnion u = lf::rect_union_from_json(r.config.at("union").dump());
    const int j = r.config.at("j").get<int>();
    const lf::PartitionBoundsReport report = lf::check_partition_bounds(u, j);
    results["j"] = report.j;
    results["modulus"] = report.modulus;
    results["total_cardinality"] = report.total_cardinality;
    results["sides_at_least_modulus"] = report.sides_at_least_modulus;
    results["modulus_divides_sides"] = report.modulus_divides_sides;
    results["all_lower_ok"] = report.all_lower_ok;
    results["all_upper_ok"] = report.all_upper_ok;
    results["residues"] = json::array();
    for (const lf::ResidueBoundEntry& e : report.entries) {
      results["residues"].push_back({{"a", e.a.coords()},
                                     {"card", e.card},
                                     {"lower_bound", e.lower_bound},
                                     {"upper_bound", e.upper_bound},
                                     {"lower_ok", e.lower_ok},
                                     {"upper_ok", e.upper_ok}});
    }
  } else {
    throw std::invalid_argument("unknown sets action '" + action + "' (geometric|validate|residues)");
  }
  if (r.format == "json") {
    json out = json_envelope(r);
    out["results"] = results;
    emit(r, out.dump(2) + "\n");
    return kExitOk;
  }
  std::string body = csv_preamble(r);
  body += "results " + results.dump() + '\n';
  emit(r, body);
  return kExitOk;
}

int dispatch(const std::string& experiment, const CliOverrides& cli) {
  std::ifstream is(cli.config_path);
  if (!is) throw std::invalid_argument("cannot open config file " + cli.config_path);
  json raw;
  try {
    raw = json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error: " + std::string(e.what()));
  }
  const Resolved r = resolve(raw, experiment, cli);
  if (experiment == "maxnorm") return run_maxnorm(r);
  if (experiment == "bound") return run_bound(r);
  if (experiment == "compare") return run_compare(r);
  if (experiment == "verify") return run_verify(r);
  if (experiment == "orlicz") return run_orlicz(r);
  if (experiment == "hermite") return run_hermite(r);
  if (experiment == "sets") return run_sets(r);
  throw std::invalid_argument("unknown experiment '" + experiment + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification toolkit for LIL maximal inequalities on random fields"};
  app.require_subcommand(1);

  CliOverrides cli;
  std::string experiment;
  for (const std::string name : {"maxnorm", "bound", "compare", "verify", "orlicz", "hermite", "sets"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", cli.config_path, "JSON experiment config")->required();
    sub->add_option("--seed", [&cli](const CLI::results_t& res) {
      try {
        cli.seed = std::stoull(res[0]);
      } catch (...) {
        return false;
      }
      return true;
    }, "Override the config seed");
    sub->add_option("--out", [&cli](const CLI::results_t& res) {
      cli.out = res[0];
      return true;
    }, "Override the output path");
    sub->add_option("--threads", [&cli](const CLI::results_t& res) {
      try {
        cli.threads = std::stoi(res[0]);
      } catch (...) {
        return false;
      }
      return true;
    }, "Worker pool size (default: LILFIELDS_THREADS or hardware)");
    sub->add_flag("--strict-serial", cli.strict_serial,
                  "Single-threaded execution, byte-identical reruns");
    sub->callback([&experiment, name]() { experiment = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    return dispatch(experiment, cli);
  } catch (const lf::capability_error& e) {
    std::cerr << "numeric/capability failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}
