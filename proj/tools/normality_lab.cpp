// normality_lab: command-line front end.
//
// JSON goes to stdout (or --out), a short human summary to stderr.
// Exit codes: 0 ok, 1 bad input, 2 capability limit, 3 counterexample found.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <normality/bounds.hpp>
#include <normality/counting.hpp>
#include <normality/errors.hpp>
#include <normality/parallel.hpp>
#include <normality/perm_lemma.hpp>
#include <normality/report.hpp>
#include <normality/rng.hpp>
#include <normality/signtxt.hpp>
#include <normality/structure_props.hpp>
#include <normality/suites.hpp>

namespace nl = normality;
using nlohmann::json;

namespace {

struct Common {
  unsigned threads = nl::default_thread_count();
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  bool no_timing = false;
};

struct Emitter {
  const Common& common;
  std::vector<std::string> argv;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  nl::RunManifest manifest(const std::string& sub) const {
    nl::RunManifest m{sub, argv, common.seed, common.threads, std::nullopt};
    if (!common.no_timing)
      m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
  }

  void write(const std::string& text) const {
    if (common.out.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(common.out);
    if (!f) throw nl::InputError("cannot write " + common.out);
    f << text;
  }

  void json_doc(const std::string& sub, json body) const { write(nl::document(manifest(sub), std::move(body)).dump(2) + "\n"); }
};

}  // namespace

int main(int argc, char** argv) {
  Common common;
  CLI::App app{"Exact and Monte Carlo experiments on the normality probability of random sign matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", common.threads, "worker threads (default: NORMALITY_LAB_THREADS or hardware)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "base seed for randomized runs");
  app.add_option("--out", common.out, "write the report here instead of stdout");
  app.add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--no-timing", common.no_timing, "omit wall-clock fields (byte-stable output)");

  std::size_t n = 0;
  std::string c_path;
  bool allow_long_run = false;
  bool sweep = false;
  bool symmetric = false;
  auto* enumerate = app.add_subcommand("enumerate", "exact count of normal (or C-normal) matrices");
  enumerate->add_option("--n", n, "dimension")->required();
  enumerate->add_option("--c", c_path, "integer matrix C (C-normal count, n <= 4)");
  enumerate->add_flag("--allow-long-run", allow_long_run, "permit n = 6");
  enumerate->add_flag("--sweep", sweep, "every dimension 1..n");
  enumerate->add_flag("--symmetric", symmetric, "count symmetric matrices instead (n <= 4)");

  std::string event = "normal";
  std::uint64_t samples = 100000;
  std::size_t m = 2;
  std::size_t q = 2;
  auto* sample = app.add_subcommand("sample", "Monte Carlo frequency with a 95% Wilson interval");
  sample->add_option("--n", n, "dimension")->default_val(3);
  sample->add_option("--event", event, "normal | symmetric | propertyP | profileConformance");
  sample->add_option("--samples", samples, "number of draws")->default_val(100000);
  sample->add_option("--m", m, "propertyP: half the row count")->default_val(2);
  sample->add_option("--q", q, "propertyP: column count")->default_val(2);

  std::string matrix_path;
  bool random_matrix = false;
  auto* permute = app.add_subcommand("permute", "greedy permutation trace, profile fit and checks");
  permute->add_option("--matrix", matrix_path, "sign matrix in signtxt form");
  permute->add_flag("--random", random_matrix, "use a random matrix of size --n from --seed");
  permute->add_option("--n", n, "dimension for --random");

  long long k_opt = -1;
  bool reduce = false;
  auto* props = app.add_subcommand("props", "property P / F_k census or single-matrix check");
  props->add_option("--m", m, "census: half the row count")->default_val(2);
  props->add_option("--q", q, "census: column count")->default_val(2);
  props->add_option("--samples", samples, "census draws when 2mq > 24")->default_val(100000);
  props->add_option("--matrix", matrix_path, "check mode: 2m x q +/-1 matrix");
  props->add_option("--k", k_opt, "check mode: also test property F_k");
  props->add_flag("--reduce", reduce, "check mode: run the P -> F_k swap reduction");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  verify->add_option("suite", suite, "odlyzko | perm-lemma | ab-monotone | recursion | p-to-fk | prop26 | calibration | all")
      ->required();
  verify->add_option("--n", n, "recursion suite dimension")->default_val(3);
  verify->add_flag("--allow-long-run", allow_long_run, "permit the n = 4 recursion check");

  double alpha0 = nl::kAlphaStart;
  double tol = 1e-6;
  auto* optimize = app.add_subcommand("optimize", "six boundary cases and the alpha fixed point");
  optimize->add_option("--alpha0", alpha0, "starting alpha")->default_val(nl::kAlphaStart);
  optimize->add_option("--tol", tol, "convergence tolerance")->default_val(1e-6);

  double alpha = 0.0;
  double bn = 1.0;
  double bk = 0.5;
  double bt = 0.5;
  std::string formula = "all";
  auto* bounds = app.add_subcommand("bounds", "evaluate an exponent formula at (alpha, n, k, t)");
  bounds->add_option("--alpha", alpha, "alpha")->default_val(0.0);
  bounds->add_option("--n", bn, "n")->default_val(1.0);
  bounds->add_option("--k", bk, "k")->default_val(0.5);
  bounds->add_option("--t", bt, "t")->default_val(0.5);
  bounds->add_option("--formula", formula, "f | g1 | g2 | lemma31 | lemma33 | combined | all")
      ->check(CLI::IsMember({"f", "g1", "g2", "lemma31", "lemma33", "combined", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Emitter emit{common, std::vector<std::string>(argv + 1, argv + argc)};
  const bool timing = !common.no_timing;

  try {
    if (*enumerate) {
      std::vector<std::size_t> dims;
      if (sweep)
        for (std::size_t d = 1; d <= n; ++d) dims.push_back(d);
      else
        dims.push_back(n);
      std::vector<nl::CountReport> reps;
      for (auto d : dims) {
        if (symmetric) reps.push_back(nl::enumerate_symmetric(d));
        else if (!c_path.empty()) reps.push_back(nl::enumerate_c_normal(d, nl::read_int_matrix(c_path), common.threads));
        else reps.push_back(nl::enumerate_nu(d, common.threads, allow_long_run));
        std::cerr << "n=" << d << " " << reps.back().event << ": " << reps.back().hits << " / " << reps.back().total
                  << "\n";
      }
      if (common.format == "csv") {
        std::string out = "n,mode,hits,total,log2prob\n";
        for (const auto& r : reps) {
          out += std::to_string(r.n) + "," + nl::to_string(r.mode) + "," + r.hits.get_str() + "," + r.total.get_str() +
                 "," + nl::json(std::log2(r.probability.get_d())).dump() + "\n";
        }
        emit.write(out);
      } else if (reps.size() == 1) {
        emit.json_doc("enumerate", {{"report", nl::to_json(reps.front(), timing)}});
      } else {
        json arr = json::array();
        for (const auto& r : reps) arr.push_back(nl::to_json(r, timing));
        emit.json_doc("enumerate", {{"reports", arr}});
      }
      return 0;
    }

    if (*sample) {
      nl::EventSpec spec{nl::parse_event(event), n, m, q};
      const auto rep = nl::montecarlo(spec, samples, common.seed, common.threads);
      std::cerr << rep.event << ": " << rep.hits << " / " << rep.samples << ", 95% CI [" << rep.ci->low << ", "
                << rep.ci->high << "]\n";
      if (common.format == "csv") {
        emit.write("n,mode,hits,total,log2prob\n" + std::to_string(rep.n) + ",montecarlo," + rep.hits.get_str() + "," +
                   rep.total.get_str() + "," +
                   (rep.hits == 0 ? std::string("-inf") : json(std::log2(rep.probability.get_d())).dump()) + "\n");
      } else {
        emit.json_doc("sample", {{"report", nl::to_json(rep, timing)}});
      }
      return 0;
    }

    if (*permute) {
      nl::SignMatrix mat;
      if (!matrix_path.empty()) {
        mat = nl::read_sign_matrix(matrix_path);
      } else if (random_matrix) {
        if (n < 1) throw nl::InputError("permute --random needs --n >= 1");
        nl::SampleRng rng(common.seed, 0, 5);
        mat = nl::random_sign_matrix(n, rng);
      } else {
        throw nl::InputError("permute needs --matrix or --random");
      }
      const auto tr = nl::greedy_sigma(mat);
      const auto fit = nl::fit_kt(tr.profile);
      std::cerr << "n=" << mat.n() << " k=" << fit.k << " t=" << fit.t << " deviations=" << fit.deviations.size()
                << " ab-violations=" << nl::check_ab(tr).size() << "\n";
      emit.json_doc("permute", {{"input", nl::format_sign_matrix(mat)}, {"trace", nl::to_json(tr)}});
      return 0;
    }

    if (*props) {
      if (!matrix_path.empty()) {
        const nl::PairedMatrix a(nl::read_pm1_matrix(matrix_path));
        json body = {{"m", a.m()}, {"q", a.q()}, {"propertyP", nl::to_json(nl::has_property_P(a))}};
        if (k_opt >= 0) body["propertyFk"] = nl::to_json(nl::has_property_Fk(a, static_cast<std::size_t>(k_opt)));
        if (reduce) {
          const auto red = nl::reduce_P_to_Fk(a);
          body["reduction"] = {{"script", nl::to_json(red.script)}, {"result", nl::format_pm1_matrix(red.result.rows())}};
        }
        std::cerr << "property P: " << (body["propertyP"]["holds"].get<bool>() ? "holds" : "fails") << "\n";
        emit.json_doc("props", body);
        return 0;
      }
      const auto cen = nl::census(m, q, samples, common.seed, common.threads);
      if (common.format == "csv") {
        std::string out = "m,q,k,countP,countFk,boundExponent,boundExponentProof\n";
        for (const auto& r : cen.rows)
          out += std::to_string(r.m) + "," + std::to_string(r.q) + "," + std::to_string(r.k) + "," +
                 std::to_string(r.count_p) + "," + std::to_string(r.count_fk) + "," + std::to_string(r.bound_exponent) +
                 "," + std::to_string(r.bound_exponent_proof) + "\n";
        emit.write(out);
      } else {
        emit.json_doc("props", {{"census", nl::to_json(cen)}});
      }
      std::cerr << "census m=" << m << " q=" << q << " over " << cen.population << " matrices\n";
      return 0;
    }

    if (*verify) {
      nl::SuiteOptions opt{common.seed, common.threads, n, allow_long_run};
      std::vector<std::string> names;
      if (suite == "all") names = nl::suite_names();
      else names.push_back(suite);
      json results = json::array();
      bool all_passed = true;
      for (const auto& s : names) {
        auto r = nl::run_suite(s, opt);
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, " << r.failures
                  << " failures";
        if (timing) std::cerr << ", " << r.seconds << " s";
        std::cerr << ")\n";
        if (r.witness) std::cerr << "witness (" << r.witness_note << "):\n" << *r.witness;
        all_passed = all_passed && r.passed;
        results.push_back(nl::to_json(r, timing));
      }
      emit.json_doc("verify", {{"passed", all_passed}, {"suites", results}});
      return all_passed ? 0 : 3;
    }

    if (*optimize) {
      const auto fp = nl::alpha_fixed_point(alpha0, tol);
      const nl::FeasibilityOptions loose{false};
      json sensitivity = json::array();
      for (int id : {5, 6}) {
        const auto c = nl::case_value(id, fp.alpha, loose);
        sensitivity.push_back({{"caseId", id}, {"withoutKLeT", nl::number(c.value)}});
      }
      const auto l31 = nl::lemma31_maximum();
      const auto l31_loose = nl::lemma31_maximum(loose);
      const auto comb = nl::combined_maximum(fp.alpha);
      json spot = json::array();
      for (const auto& c : fp.cases) {
        for (const auto& s : nl::interval_spot_check(fp.alpha, c.worst_k, c.worst_t))
          spot.push_back({{"caseId", c.case_id}, {"formula", s.formula}, {"ok", s.ok}});
      }
      const auto area = nl::feasible_region(1e-3);
      const auto area_loose = nl::feasible_region(1e-3, loose);
      std::fprintf(stderr, "case  worstK    worstT    value     target\n");
      for (const auto& c : fp.cases)
        std::fprintf(stderr, "%d     %.5f   %.5f   %.5f   %.4f\n", c.case_id, c.worst_k, c.worst_t, c.value, c.target);
      std::fprintf(stderr, "alpha = %.6f (binding case %d, %zu iterations)\n", fp.alpha, fp.binding_case, fp.trace.size());
      emit.json_doc("optimize",
                    {{"fixedPoint", nl::to_json(fp)},
                     {"caseSensitivity", sensitivity},
                     {"lemma31Maximum", {{"value", l31.value}, {"k", l31.k}, {"t", l31.t}}},
                     {"lemma31MaximumWithoutKLeT", {{"value", l31_loose.value}, {"k", l31_loose.k}, {"t", l31_loose.t}}},
                     {"combinedMaximum", {{"value", comb.value}, {"k", comb.k}, {"t", comb.t}}},
                     {"feasibleArea", {{"resolution", 1e-3}, {"area", area.area}, {"areaWithoutKLeT", area_loose.area}}},
                     {"intervalSpotChecks", spot}});
      return 0;
    }

    if (*bounds) {
      json vals;
      auto want = [&](const std::string& f) { return formula == "all" || formula == f; };
      if (want("f")) vals["f"] = nl::f_bound(alpha, bn, bk, bt);
      if (want("g1")) vals["g1"] = nl::g1_bound(bn, bk, bt);
      if (want("g2")) vals["g2"] = nl::g2_bound(bn, bk, bt);
      if (want("lemma33")) vals["lemma33"] = nl::lemma33_bound(alpha, bn, bk, bt);
      if (want("combined")) vals["combined"] = nl::combined_bound(alpha, bn, bk, bt);
      if (want("lemma31")) {
        const auto v = nl::lemma31_bound(bn, bk, bt);
        vals["lemma31"] = {{"inRange", v.in_range}, {"value", nl::number(v.value)}, {"boundary", v.boundary},
                           {"branchesAgree", v.branches_agree}};
      }
      vals["feasible"] = nl::feasible(bn, bk, bt);
      for (auto it = vals.begin(); it != vals.end(); ++it) std::cerr << it.key() << " = " << it.value().dump() << "\n";
      emit.json_doc("bounds", {{"alpha", alpha}, {"n", bn}, {"k", bk}, {"t", bt}, {"values", vals}});
      return 0;
    }
  } catch (const nl::InvariantViolation& e) {
    std::cerr << "counterexample: " << e.what() << "\n" << e.witness();
    json body = {{"error", "invariant-violation"}, {"message", e.what()}, {"witness", e.witness()}};
    emit.json_doc(app.get_subcommands().front()->get_name(), body);
    return 3;
  } catch (const nl::CapabilityError& e) {
    std::cerr << "capability limit: " << e.what() << "\n";
    return 2;
  } catch (const nl::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
