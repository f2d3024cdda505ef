// fdca — command line front end: plan construction and verification, the
// closed-form parameters, trace-compatibility checks, representation padding
// reports, and Monte Carlo checks of the matrix lemmas.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error.

#include "fdca/json_io.hpp"
#include "fdca/matrix_lemmas.hpp"
#include "fdca/popa_plan.hpp"
#include "fdca/rep_builder.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace fdca;

std::vector<long> parse_csv_longs(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw Error("empty entry in list: " + text);
    out.push_back(std::stol(item));
  }
  if (out.empty()) throw Error("empty list");
  return out;
}

LevelSequence parse_levels(const std::string& text) {
  LevelSequence seq;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw Error("levels are k:ell pairs, got '" + item + "'");
    seq.levels.push_back(
        {std::stol(item.substr(0, colon)), std::stol(item.substr(colon + 1))});
  }
  seq.validate();
  return seq;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

int emit(const Report& report, const std::optional<std::string>& out_path) {
  const std::string text = report.dump();
  if (out_path) write_text(*out_path, text);
  std::cout << text;
  return report.all_pass() ? 0 : 1;
}

DimensionOracle parse_oracle(const std::string& text) {
  if (text.rfind("const:", 0) == 0)
    return constant_dimension_oracle(std::stoll(text.substr(6)));
  throw Error("unknown dimension oracle '" + text + "' (use const:<int>)");
}

// ---------------------------------------------------------------------------

int run_construct(const std::string& s_text, int levels,
                  const std::string& oracle_text,
                  const std::optional<std::string>& out_path) {
  const Rational s = parse_rational(s_text);
  const ConstructionPlan plan = build_plan(s, levels, parse_oracle(oracle_text));
  const PlanVerification verification = verify_plan(plan);

  const std::string plan_text = to_json(plan).dump(2) + "\n";
  if (out_path) {
    write_text(*out_path, plan_text);
    Report report;
    report.command = "construct";
    report.add("plan construction", true,
               std::to_string(levels) + " levels toward s = " + s_text);
    report.add("plan verification", verification.all_pass());
    report.artifacts["plan_file"] = *out_path;
    report.artifacts["enclosure"] = to_json(plan.achieved);
    return emit(report, std::nullopt);
  }
  std::cout << plan_text;
  return verification.all_pass() ? 0 : 1;
}

int run_verify(const std::string& plan_path,
               const std::optional<std::string>& out_path) {
  const ConstructionPlan plan = plan_from_json(read_json_file(plan_path));
  const PlanVerification verification = verify_plan(plan);
  Report report;
  report.command = "verify";
  for (const PlanCheck& c : verification.checks)
    report.add(c.name, c.pass, c.detail);
  report.artifacts["target_s"] = rational_to_json(plan.target_s);
  report.artifacts["levels"] = plan.levels.size();
  return emit(report, out_path);
}

int run_fed(const std::string& levels_text, std::optional<long> tail_p) {
  const LevelSequence seq = parse_levels(levels_text);
  const Enclosure fed = fed_product(seq, tail_p);
  if (fed.is_point())
    std::cout << format_rational(fed.lo) << "\n";
  else
    std::cout << to_json(fed).dump() << "\n";
  return 0;
}

int run_params(const std::string& levels_text, std::optional<long> tail_p,
               const std::optional<std::string>& out_path) {
  const LevelSequence seq = parse_levels(levels_text);
  const Enclosure fed = fed_product(seq, tail_p);
  const Enclosure t = factor_parameter_t(seq, tail_p);
  const Enclosure s = factor_parameter_s(seq, tail_p);

  Report report;
  report.command = "params";
  const Rational delta = fed_product(seq).lo;
  const Rational t_exact = factor_parameter_t(seq).lo;
  const Rational s_exact = factor_parameter_s(seq).lo;
  report.add("t + delta0 = 2", t_exact + delta == 2);
  const Rational alpha1 = seq.alpha(1);
  report.add("s = 1 + (t - 1)/alpha1^2",
             s_exact == 1 + (t_exact - 1) / square(alpha1));
  report.artifacts["delta0"] = to_json(fed);
  report.artifacts["t"] = to_json(t);
  report.artifacts["s"] = to_json(s);
  return emit(report, out_path);
}

int run_rfd_check(const std::string& d_text, const std::string& left_ranks,
                  long left_n, const std::string& right_ranks, long right_n,
                  const std::optional<std::string>& out_path) {
  const std::vector<long> d_summands = parse_csv_longs(d_text);
  MultiMatrixAlgebra source{d_summands};
  UnitalEmbedding left{source, MultiMatrixAlgebra::full(left_n),
                       {parse_csv_longs(left_ranks)}};
  UnitalEmbedding right{source, MultiMatrixAlgebra::full(right_n),
                        {parse_csv_longs(right_ranks)}};
  const ObstructionVerdict verdict = rfd_obstruction_check(left, right);

  Report report;
  report.command = "rfd-check";
  report.add("trace compatibility", verdict.compatible, verdict.detail);
  Json pairs = Json::array();
  for (const auto& [lt, rt] : verdict.report.trace_pairs)
    pairs.push_back(Json::array({rational_to_json(lt), rational_to_json(rt)}));
  report.artifacts["verdict"] = verdict.compatible ? "COMPATIBLE" : "OBSTRUCTED";
  report.artifacts["induced_traces"] = pairs;
  if (!verdict.compatible) {
    report.artifacts["witness_block"] = verdict.witness_block;
    report.artifacts["witness_traces"] =
        Json::array({rational_to_json(verdict.left_trace),
                     rational_to_json(verdict.right_trace)});
  }
  return emit(report, out_path);
}

int run_rep_build(const std::string& spec_path, bool pad,
                  const std::optional<std::string>& report_path) {
  const Json spec = read_json_file(spec_path);
  const Json& am_json = spec.at("amalgam");
  AmalgamSpec amalgam{am_json.at("left_n").get<long>(),
                      am_json.at("right_n").get<long>(),
                      am_json.at("left_ranks").get<std::vector<long>>(),
                      am_json.at("right_ranks").get<std::vector<long>>()};
  amalgam.validate();
  const long a_copies = spec.value("alpha_copies", 1L);
  const long b_copies = spec.value("beta_copies", 1L);
  const RepState initial = make_initial_state(amalgam, a_copies, b_copies);

  Report report;
  report.command = "rep-build";
  if (!pad) {
    report.artifacts["current_dim"] = initial.ambient_dim;
    report.add("initial state", true,
               "dim " + std::to_string(initial.ambient_dim) +
                   "; pass --pad to extend to the padded space");
    return emit(report, report_path);
  }

  const ExtensionResult ext = extend_representations(initial);
  const ExtensionReport& r = ext.report;
  report.add("amalgam images equal", r.amalgam_images_equal_exact,
             "0/1 diagonal blocks compared exactly");
  report.add("alpha multiplicative", r.alpha_hom_residual < 1e-10,
             "residual " + std::to_string(r.alpha_hom_residual));
  report.add("beta multiplicative", r.beta_hom_residual < 1e-10,
             "residual " + std::to_string(r.beta_hom_residual));
  report.add("alpha restriction", r.alpha_restriction_residual < 1e-10,
             "residual " + std::to_string(r.alpha_restriction_residual));
  report.add("beta restriction", r.beta_restriction_residual < 1e-10,
             "residual " + std::to_string(r.beta_restriction_residual));
  report.add("invariance", r.invariance_residual < 1e-10,
             "residual " + std::to_string(r.invariance_residual));

  const std::vector<Rational> traces = amalgam.traces();
  bool ranks_ok = true;
  for (std::size_t i = 0; i < traces.size(); ++i)
    if (Rational(r.image_ranks[i]) !=
        traces[i] * (r.current_dim + r.extra_dim))
      ranks_ok = false;
  report.add("rank audit t_i (d + d')", ranks_ok);

  report.artifacts["d"] = r.current_dim;
  report.artifacts["d_prime"] = r.extra_dim;
  report.artifacts["ranks"] = r.ranks;
  report.artifacts["extra_ranks"] = r.extra_ranks;
  report.artifacts["image_ranks"] = r.image_ranks;
  report.artifacts["ambient_dim"] = ext.state.ambient_dim;

  if (spec.contains("words")) {
    Json norms = Json::array();
    for (const Json& jw : spec.at("words")) {
      FreeWord word;
      for (const Json& jl : jw.at("letters"))
        word.letters.push_back(
            {jl.at("side").get<std::string>() == "left" ? Side::Left
                                                        : Side::Right,
             matrix_from_json(jl.at("element"))});
      norms.push_back(operator_norm(evaluate_word(ext.state, word)));
    }
    report.artifacts["word_norms"] = norms;
  }
  return emit(report, report_path);
}

Matrix random_hermitian(long dim, double lo, double hi, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> spectrum(lo, hi);
  Matrix z(dim, dim);
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c) z(r, c) = std::complex<double>(g(rng), g(rng));
  const Eigen::HouseholderQR<Matrix> qr(z);
  Matrix u = qr.householderQ();
  Matrix diag = Matrix::Zero(dim, dim);
  for (long i = 0; i < dim; ++i) diag(i, i) = spectrum(rng);
  return u * diag * u.adjoint();
}

Matrix random_projection(long dim, long rank, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix z(dim, dim);
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c) z(r, c) = std::complex<double>(g(rng), g(rng));
  const Eigen::HouseholderQR<Matrix> qr(z);
  const Matrix u = qr.householderQ();
  return u.leftCols(rank) * u.leftCols(rank).adjoint();
}

int run_lemmas(const std::string& which, int trials, long dim, unsigned seed,
               const std::optional<std::string>& out_path) {
  std::mt19937 rng(seed);
  Report report;
  report.command = "lemmas";
  int failures = 0;

  if (which == "lemma51") {
    double worst_ratio = 0.0;
    for (int i = 0; i < trials; ++i) {
      const Matrix a = random_hermitian(dim, -1.0, 2.0, rng);
      try {
        const SpectralProjection sp = spectral_projection_half(a);
        if (sp.defect_hs > 0)
          worst_ratio = std::max(worst_ratio, sp.distance_hs / sp.defect_hs);
      } catch (const Error&) {
        ++failures;
      }
    }
    report.add("projection distance bound", failures == 0,
               std::to_string(trials - failures) + "/" +
                   std::to_string(trials) + " trials");
    report.artifacts["worst_ratio"] = worst_ratio;
    report.artifacts["ratio_bound"] = 2.0;
  } else if (which == "lemma52") {
    std::uniform_int_distribution<long> rank_q(1, dim);
    for (int i = 0; i < trials; ++i) {
      const long rq = rank_q(rng);
      const Matrix q = random_projection(dim, rq, rng);
      const long rp = std::uniform_int_distribution<long>(0, rq)(rng);
      const Matrix basis = detail::range_basis(q);
      const Matrix p_prime = basis.leftCols(rp) * basis.leftCols(rp).adjoint();
      const long target = std::uniform_int_distribution<long>(0, rq)(rng);
      try {
        const Matrix p = nested_projection_with_trace(p_prime, q, target);
        if (projection_rank(p) != target) ++failures;
        if (operator_norm(q * p - p) > 1e-8) ++failures;
      } catch (const Error&) {
        ++failures;
      }
    }
    report.add("nested projection with prescribed rank", failures == 0,
               std::to_string(trials) + " trials");
  } else if (which == "lemma53") {
    for (int i = 0; i < trials; ++i) {
      const long rank = std::uniform_int_distribution<long>(1, dim - 1)(rng);
      const Matrix p = random_projection(dim, rank, rng);
      const Matrix q = random_projection(dim, rank, rng);
      std::normal_distribution<double> g(0.0, 1.0);
      Matrix z(dim, dim);
      for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c)
          z(r, c) = std::complex<double>(g(rng), g(rng));
      const Matrix b = q * z * p * 0.5;
      try {
        const IsometryCompletion done = complete_partial_isometry(b, p, q);
        if (operator_norm(done.v.adjoint() * done.v - p) > 1e-8 ||
            operator_norm(done.v * done.v.adjoint() - q) > 1e-8)
          ++failures;
      } catch (const Error&) {
        ++failures;
      }
    }
    report.add("partial isometry completion", failures == 0,
               std::to_string(trials) + " trials");
  } else {
    throw Error("unknown check '" + which +
                "' (use lemma51, lemma52 or lemma53)");
  }
  report.artifacts["trials"] = trials;
  report.artifacts["failures"] = failures;
  report.artifacts["dim"] = dim;
  return emit(report, out_path);
}

int run_oracle(const std::string& levels_text,
               const std::optional<std::string>& out_path) {
  const LevelSequence seq = parse_levels(levels_text);
  const Rational brute = subset_sum_oracle(seq);
  const Rational closed = fed_product(seq).lo;
  Report report;
  report.command = "oracle";
  report.add("subset sum equals product formula", brute == closed,
             format_rational(brute) + " vs " + format_rational(closed));
  report.artifacts["delta0"] = rational_to_json(brute);
  report.artifacts["subsets"] = (1LL << seq.size());
  return emit(report, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic and matrix-numerics toolkit for amalgamated "
               "free products of matrix algebras"};
  app.require_subcommand(1);

  std::string s_text, oracle_text = "const:1", plan_path, levels_text;
  std::string d_text, left_ranks, right_ranks, spec_path, which = "lemma51";
  long left_n = 0, right_n = 0, dim = 8;
  int levels = 1, trials = 1000;
  unsigned seed = 1234;
  bool pad = false;
  std::optional<std::string> out_path;
  std::optional<long> tail_p;

  auto* construct = app.add_subcommand("construct", "build a certified plan");
  construct->add_option("--s", s_text, "target parameter, rational p/q")
      ->required();
  construct->add_option("--levels", levels, "number of levels")->required();
  construct->add_option("--t-oracle", oracle_text, "dimension oracle (const:<int>)");
  construct->add_option("--out", out_path, "plan output file");

  auto* verify = app.add_subcommand("verify", "re-verify a plan file");
  verify->add_option("plan", plan_path, "plan JSON file")->required();
  verify->add_option("--out", out_path, "report output file");

  auto* fed = app.add_subcommand("fed", "free entropy dimension of a level sequence");
  fed->add_option("--levels", levels_text, "sequence k1:l1,k2:l2,...")->required();
  fed->add_option("--tail-p", tail_p, "decay certificate exponent");

  auto* params = app.add_subcommand("params", "parameters t and s of a level sequence");
  params->add_option("--levels", levels_text)->required();
  params->add_option("--tail-p", tail_p);
  params->add_option("--out", out_path);

  auto* rfd = app.add_subcommand("rfd-check", "trace compatibility of two embeddings");
  rfd->add_option("--d", d_text, "summand sizes of the amalgam")->required();
  rfd->add_option("--left-ranks", left_ranks)->required();
  rfd->add_option("--left-n", left_n)->required();
  rfd->add_option("--right-ranks", right_ranks)->required();
  rfd->add_option("--right-n", right_n)->required();
  rfd->add_option("--out", out_path);

  auto* rep = app.add_subcommand("rep-build", "build padded block representations");
  rep->add_option("--spec", spec_path, "problem JSON file")->required();
  rep->add_flag("--pad", pad, "extend to the padded space");
  rep->add_option("--report", out_path, "report output file");

  auto* lemmas = app.add_subcommand("lemmas", "Monte Carlo checks of the matrix lemmas");
  lemmas->add_option("--check", which, "lemma51, lemma52 or lemma53");
  lemmas->add_option("--trials", trials);
  lemmas->add_option("--dim", dim);
  lemmas->add_option("--seed", seed);
  lemmas->add_option("--out", out_path);

  auto* oracle = app.add_subcommand("oracle", "brute-force subset-sum cross check");
  oracle->add_option("--levels", levels_text)->required();
  oracle->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
    if (construct->parsed())
      return run_construct(s_text, levels, oracle_text, out_path);
    if (verify->parsed()) return run_verify(plan_path, out_path);
    if (fed->parsed()) return run_fed(levels_text, tail_p);
    if (params->parsed()) return run_params(levels_text, tail_p, out_path);
    if (rfd->parsed())
      return run_rfd_check(d_text, left_ranks, left_n, right_ranks, right_n,
                           out_path);
    if (rep->parsed()) return run_rep_build(spec_path, pad, out_path);
    if (lemmas->parsed())
      return run_lemmas(which, trials, dim, seed, out_path);
    if (oracle->parsed()) return run_oracle(levels_text, out_path);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  } catch (const fdca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
