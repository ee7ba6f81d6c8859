#include "redstate/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "redstate/constructors.hpp"
#include "redstate/extremality.hpp"
#include "redstate/feasibility.hpp"
#include "redstate/io.hpp"
#include "redstate/majorization.hpp"
#include "redstate/oracle.hpp"

namespace redstate::cli {

namespace {

using io::Json;

constexpr Index kSearchChunk = 1024;

struct Options {
  std::string input;
  std::string output;
  std::optional<Index> m;
  std::optional<Index> n;
  Index k = 1;
  Index r = 1;
  bool extreme = false;
  std::optional<Index> query_k;
  std::string side = "first";
  std::string norms = "1,2,inf";
  std::string curve;
  std::string certificate;
  std::string lambda;
  std::string mu;
  std::uint64_t seed = 0;
  Index trials = 1;
  Index mix = 4;
  Index jobs = 1;
  std::string p = "1";
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::infeasible:
    case ErrorKind::infeasible_rank:
    case ErrorKind::precondition:
    case ErrorKind::unsupported_regime:
      return negative;
    case ErrorKind::dimension:
    case ErrorKind::domain:
    case ErrorKind::format:
      return usage;
    case ErrorKind::not_hermitian:
    case ErrorKind::not_psd:
    case ErrorKind::trace_not_one:
    case ErrorKind::invalid_certificate:
    case ErrorKind::internal:
      return invalid;
  }
  return invalid;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("REDUCED_STATE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      fail(ErrorKind::format, std::string("REDUCED_STATE_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

double parse_number(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
          t.end());
  if (t == "inf" || t == "Inf" || t == "INF") return kInf;
  auto whole = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v))
      fail(ErrorKind::format, "not a number: '" + text + "'");
    return v;
  };
  const auto slash = t.find('/');
  if (slash == std::string::npos) return whole(t);
  const double den = whole(t.substr(slash + 1));
  if (den == 0.0) fail(ErrorKind::format, "zero denominator in '" + text + "'");
  return whole(t.substr(0, slash)) / den;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) fail(ErrorKind::format, "empty list");
  return out;
}

// "a,b,c" or "@file.json".
Spectrum parse_spectrum(const std::string& text, const char* name) {
  if (text.empty()) fail(ErrorKind::format, std::string("missing --") + name);
  if (text.front() == '@') return Spectrum(io::spectrum_from_json(io::read_file(text.substr(1))));
  return Spectrum(parse_list(text));
}

Json number_or_inf(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  void emit(const Json& doc) const {
    if (o_.output.empty())
      out_ << doc.dump(2) << '\n';
    else
      io::write_file(o_.output, doc);
  }

  BipartiteState load_state() const {
    const io::MatrixDocument doc = io::document_from_json(io::read_file(o_.input));
    const Index d = doc.matrix.rows();
    Index m = o_.m.value_or(doc.m.value_or(0));
    Index n = o_.n.value_or(doc.n.value_or(0));
    if (m == 0 && n > 0 && d % n == 0) m = d / n;
    if (n == 0 && m > 0 && d % m == 0) n = d / m;
    if (m == 0 || n == 0)
      fail(ErrorKind::format, "state factorization unknown: give --m or --n, or m and n in the file");
    if (m * n != d) {
      std::ostringstream os;
      os << "matrix of dimension " << d << " does not factor as " << m << " x " << n;
      fail(ErrorKind::dimension, os.str());
    }
    return BipartiteState::from(doc.matrix, m, n);
  }

  DensityMatrix load_sigma() const {
    return validate_density(io::document_from_json(io::read_file(o_.input)).matrix);
  }

  Index need_m() const {
    if (!o_.m) fail(ErrorKind::format, "missing --m");
    return *o_.m;
  }

  int validate() const {
    const io::MatrixDocument doc = io::document_from_json(io::read_file(o_.input));
    const DensityMatrix rho = validate_density(doc.matrix);
    Json rep{{"valid", true},
             {"dim", rho.dim()},
             {"trace", rho.matrix().trace().real()},
             {"rank", rho.rank()},
             {"spectrum", rho.spectrum().values()}};
    const Index m = o_.m.value_or(doc.m.value_or(0));
    if (m > 0) {
      const BipartiteState s = load_state();
      rep["m"] = s.m();
      rep["n"] = s.n();
      rep["marginal_first_spectrum"] = eigenvalues(partial_trace_first(s)).values();
      rep["marginal_second_spectrum"] = eigenvalues(partial_trace_second(s)).values();
    }
    emit(rep);
    return ok;
  }

  int ptrace() const {
    const BipartiteState s = load_state();
    const HermitianMatrix h = o_.side == "first" ? partial_trace_first(s) : partial_trace_second(s);
    emit(io::matrix_to_json(h.matrix()));
    return ok;
  }

  int purify() const {
    emit(io::state_to_json(redstate::purify(load_sigma(), need_m())));
    return ok;
  }

  int construct() const {
    emit(io::state_to_json(construct_rank_k(load_sigma(), need_m(), o_.k)));
    return ok;
  }

  int approx() const {
    const DensityMatrix sigma = load_sigma();
    const Index m = need_m();
    const std::vector<double> ps = parse_list(o_.norms);
    const ApproxResult res = optimal_low_rank(sigma, m, o_.k, ps);
    Json norms = Json::array();
    for (const auto& nv : res.norms) norms.push_back({{"p", number_or_inf(nv.p)}, {"value", nv.value}});
    emit({{"exact", res.exact},
          {"mu_shift", res.mu_shift},
          {"residual_spectrum", res.residual_spectrum},
          {"norms", norms},
          {"rho", io::state_to_json(res.rho)}});

    if (!o_.curve.empty()) {
      std::ofstream table(o_.curve);
      if (!table) fail(ErrorKind::format, "cannot write " + o_.curve);
      table.precision(17);
      table << 'k';
      for (double p : ps) table << "\tp=" << p;
      table << '\n';
      const Index k_exact = (sigma.rank() + m - 1) / m;
      for (Index k = 1; k <= k_exact; ++k) {
        table << k;
        for (const auto& nv : optimal_low_rank(sigma, m, k, ps).norms) table << '\t' << nv.value;
        table << '\n';
      }
    }
    return ok;
  }

  int extreme() const {
    const BipartiteState s = load_state();
    const ExtremalityReport rep = is_extreme(s);
    Json doc{{"is_extreme", rep.is_extreme},
             {"rank", rep.rank},
             {"gram_min_eig", rep.gram_min_eig},
             {"gram_max_eig", rep.gram_max_eig},
             {"marginal", rep.marginal}};
    if (rep.certificate) {
      doc["certificate"] = io::matrix_to_json(rep.certificate->matrix());
      if (!o_.certificate.empty())
        io::write_file(o_.certificate, io::matrix_to_json(rep.certificate->matrix()));
    }
    emit(doc);
    return ok;
  }

  int split() const {
    const BipartiteState s = load_state();
    std::optional<HermitianMatrix> cert;
    if (!o_.certificate.empty()) {
      cert = HermitianMatrix::from(io::matrix_from_json(io::read_file(o_.certificate)));
    } else {
      ExtremalityReport rep = is_extreme(s);
      if (!rep.certificate) fail(ErrorKind::precondition, "state is an extreme point; nothing to split");
      cert = std::move(rep.certificate);
    }
    const auto [low, high] = split_nonextreme(s, *cert);
    emit({{"rho1", io::state_to_json(low)},
          {"rho2", io::state_to_json(high)},
          {"ranks", {s.rank(), low.rank(), high.rank()}}});
    return ok;
  }

  int feasible() const {
    const Index m = need_m();
    const RankRange range = o_.extreme ? extreme_rank_range(o_.r, m) : element_rank_range(o_.r, m);
    Json doc{{"k_min", range.k_min}, {"k_max", range.k_max}};
    if (!o_.query_k) {
      emit(doc);
      return ok;
    }
    const bool holds = range.contains(*o_.query_k);
    doc["k"] = *o_.query_k;
    doc["feasible"] = holds;
    emit(doc);
    return holds ? ok : negative;
  }

  std::pair<Spectrum, Spectrum> spectra(Index& m) const {
    Spectrum lambda = parse_spectrum(o_.lambda, "lambda");
    Spectrum mu = parse_spectrum(o_.mu, "mu");
    const auto n = static_cast<Index>(lambda.size());
    m = o_.m.value_or(static_cast<Index>(mu.size()) / n);
    if (m < 1 || static_cast<Index>(mu.size()) != m * n) {
      std::ostringstream os;
      os << "mu has " << mu.size() << " entries, expected m * " << n;
      fail(ErrorKind::dimension, os.str());
    }
    return {std::move(lambda), std::move(mu)};
  }

  int compat() const {
    Index m = 0;
    const auto [lambda, mu] = spectra(m);
    const auto n = static_cast<Index>(lambda.size());
    auto checks_json = [](const CompatReport& rep) {
      Json arr = Json::array();
      for (const auto& c : rep.checks) arr.push_back({{"id", c.id}, {"pass", c.pass}, {"slack", c.slack}});
      return arr;
    };
    const CompatReport necessary = necessary_spectra_compat(lambda, mu, m);
    Json doc{{"m", m}, {"n", n}};
    bool holds = false;
    if (m == 2 && n == 2) {
      holds = compat_2x2(lambda, mu);
      doc["method"] = "2x2";
      doc["checks"] = Json::array({{{"id", "mu1+mu2>=lambda1"},
                                    {"pass", holds},
                                    {"slack", mu[0] + mu[1] - lambda[0]}}});
    } else if (m == 2 && n == 3) {
      const CompatReport rep = compat_2x3(lambda, mu);
      holds = rep.holds;
      doc["method"] = "2x3";
      doc["checks"] = checks_json(rep);
    } else {
      holds = necessary.holds;
      doc["method"] = "necessary";
      doc["checks"] = checks_json(necessary);
    }
    // Decisive for (2,2), (2,3) and every m >= n; otherwise only necessary.
    doc["decisive"] = (m == 2 && n <= 3) || m >= n;
    doc["necessary"] = {{"holds", necessary.holds}, {"checks", checks_json(necessary)}};
    doc["holds"] = holds;
    emit(doc);
    return holds ? ok : negative;
  }

  int spectra_construct() const {
    Index m = 0;
    const auto [lambda, mu] = spectra(m);
    emit(io::state_to_json(construct_with_spectra(lambda, mu, m)));
    return ok;
  }

  int construct23() const {
    Index m = 0;
    const auto [lambda, mu] = spectra(m);
    if (m != 2 || lambda.size() != 3) fail(ErrorKind::dimension, "construct23 needs 3 + 6 eigenvalues");
    emit(io::state_to_json(construct_23(lambda, mu)));
    return ok;
  }

  // Runs task(i) for i < count over `jobs` threads; results land by index so
  // the output does not depend on the thread count.
  template <typename T, typename F>
  std::vector<T> parallel(Index count, F task) const {
    std::vector<std::optional<T>> slots(static_cast<std::size_t>(count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    const Index jobs = std::clamp<Index>(o_.jobs, 1, std::max<Index>(count, 1));
    std::vector<std::thread> pool;
    for (Index j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        for (Index i = j; i < count; i += jobs) {
          try {
            slots[static_cast<std::size_t>(i)].emplace(task(i));
          } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    std::vector<T> out;
    for (Index i = 0; i < count; ++i) {
      if (errors[static_cast<std::size_t>(i)]) std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
      out.push_back(std::move(*slots[static_cast<std::size_t>(i)]));
    }
    return out;
  }

  int sample() const {
    const DensityMatrix sigma = load_sigma();
    const Index m = need_m();
    const auto states = parallel<Json>(o_.trials, [&](Index t) {
      const SamplerConfig cfg{derive_seed(o_.seed, static_cast<std::uint64_t>(t)), 1, o_.mix};
      return io::state_to_json(sample_in_S(sigma, m, cfg));
    });
    emit({{"seed", o_.seed}, {"samples", states}});
    return ok;
  }

  int search() const {
    const DensityMatrix sigma = load_sigma();
    const Index m = need_m();
    const double p = parse_number(o_.p);
    const Index chunks = (o_.trials + kSearchChunk - 1) / kSearchChunk;
    const auto mins = parallel<double>(chunks, [&](Index c) {
      const Index trials = std::min(kSearchChunk, o_.trials - c * kSearchChunk);
      const SamplerConfig cfg{derive_seed(o_.seed, static_cast<std::uint64_t>(c)), trials, 1};
      return search_min_norm(sigma, m, o_.k, p, cfg);
    });
    emit({{"seed", o_.seed},
          {"trials", o_.trials},
          {"k", o_.k},
          {"p", number_or_inf(p)},
          {"min_norm", *std::min_element(mins.begin(), mins.end())}});
    return ok;
  }

  int demo_s5() const {
    const Index m = 2;
    const Index n = 3;
    const DensityMatrix sigma = validate_density(ComplexMatrix::Identity(n, n) / 3.0);
    const Spectrum lambda{1.0 / 3, 1.0 / 3, 1.0 / 3};

    Json examples = Json::array();
    for (const Spectrum& a : {Spectrum{1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0, 0},
                              Spectrum{0.5, 0.1, 0.1, 0.1, 0.1, 0.1},
                              Spectrum{0.3, 0.2, 0.2, 0.1, 0.1, 0.1}}) {
      const bool predicate = a[1] + a[2] >= 1.0 / 3 - kMajTol && 1.0 / 3 >= a[3] + a[4] - kMajTol;
      examples.push_back({{"mu", a.values()},
                          {"predicate", predicate},
                          {"compat_2x3", compat_2x3(lambda, a).holds}});
    }

    const RankRange elements = element_rank_range(sigma.rank(), m);
    bool elements_ok = true;
    for (Index k = elements.k_min; k <= elements.k_max; ++k) {
      const BipartiteState s = construct_rank_k(sigma, m, k);
      elements_ok = elements_ok && s.rank() == k &&
                    max_abs(partial_trace_first(s).matrix() - sigma.matrix()) <= 1e-10;
    }
    for (Index k : {elements.k_min - 1, elements.k_max + 1}) {
      try {
        construct_rank_k(sigma, m, k);
        elements_ok = false;
      } catch (const Error& e) {
        elements_ok = elements_ok && e.kind() == ErrorKind::infeasible_rank;
      }
    }

    const RankRange extremes = extreme_rank_range(sigma.rank(), m);
    bool extremes_ok = true;
    for (Index k = elements.k_min; k <= elements.k_max; ++k) {
      const BipartiteState s = construct_rank_k(sigma, m, k);
      const bool want = extremes.contains(k);
      extremes_ok = extremes_ok && is_extreme(s).is_extreme == want;
    }

    emit({{"sigma", "I3/3"},
          {"m", m},
          {"n", n},
          {"spectra",
           {{"lambda", lambda.values()},
            {"predicate", "a2+a3 >= 1/3 >= a4+a5"},
            {"examples", examples}}},
          {"element_ranks", {{"k_min", elements.k_min}, {"k_max", elements.k_max}, {"verified", elements_ok}}},
          {"extreme_ranks", {{"k_min", extremes.k_min}, {"k_max", extremes.k_max}, {"verified", extremes_ok}}}});
    return elements_ok && extremes_ok ? ok : invalid;
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bipartite states with prescribed reduced states", "redstate"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("-o,--output", o.output, "Write the result document here instead of stdout");

  auto input = [&](CLI::App* sub) { sub->add_option("input", o.input, "Matrix or state file")->required(); };
  auto dims = [&](CLI::App* sub) {
    sub->add_option("--m", o.m, "First-factor dimension")->check(CLI::PositiveNumber);
    sub->add_option("--n", o.n, "Second-factor dimension")->check(CLI::PositiveNumber);
  };
  auto need_m = [&](CLI::App* sub) {
    sub->add_option("--m", o.m, "First-factor dimension")->required()->check(CLI::PositiveNumber);
  };
  auto pair = [&](CLI::App* sub) {
    sub->add_option("--lambda", o.lambda, "Marginal spectrum: comma list or @file")->required();
    sub->add_option("--mu", o.mu, "Global spectrum: comma list or @file")->required();
  };
  auto with_m = [&](CLI::App* sub) {
    sub->add_option("--m", o.m, "First-factor dimension (default |mu|/|lambda|)")->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "Validate a density matrix and report its spectrum");
  input(validate);
  dims(validate);

  auto* ptrace = app.add_subcommand("ptrace", "Partial trace of a bipartite state");
  input(ptrace);
  dims(ptrace);
  ptrace->add_option("--side", o.side, "Factor traced out")->check(CLI::IsMember({"first", "second"}));

  auto* purify = app.add_subcommand("purify", "Rank-one state with the given first marginal");
  input(purify);
  need_m(purify);

  auto* construct = app.add_subcommand("construct", "Rank-k state with the given first marginal");
  input(construct);
  need_m(construct);
  construct->add_option("--k", o.k, "Rank")->required()->check(CLI::PositiveNumber);

  auto* approx = app.add_subcommand("approx", "Best rank-k approximation of a first marginal");
  input(approx);
  need_m(approx);
  approx->add_option("--k", o.k, "Rank bound")->required()->check(CLI::PositiveNumber);
  approx->add_option("--norms", o.norms, "Schatten exponents, e.g. 1,2,inf");
  approx->add_option("--emit-curve", o.curve, "Write a (k, norm) table for k up to the exact rank");

  auto* extreme = app.add_subcommand("extreme", "Extreme-point test within S(tr_1 rho)");
  input(extreme);
  dims(extreme);
  extreme->add_option("--certificate", o.certificate, "Write the dependency certificate here");

  auto* split = app.add_subcommand("split", "Split a non-extreme state into two with a rank drop");
  input(split);
  dims(split);
  split->add_option("--certificate", o.certificate, "Certificate file (computed when omitted)");

  auto* feasible = app.add_subcommand("feasible", "Ranks attained in S(sigma) or among its extreme points");
  feasible->add_option("--r", o.r, "Rank of sigma")->required()->check(CLI::PositiveNumber);
  need_m(feasible);
  feasible->add_flag("--extreme", o.extreme, "Ranks of extreme points");
  feasible->add_option("--k", o.query_k, "Query a single rank")->check(CLI::PositiveNumber);

  auto* compat = app.add_subcommand("compat", "Compatibility of a marginal and a global spectrum");
  pair(compat);
  with_m(compat);

  auto* spectra = app.add_subcommand("spectra-construct", "State with prescribed spectra, m >= n");
  pair(spectra);
  with_m(spectra);

  auto* c23 = app.add_subcommand("construct23", "State with prescribed spectra on (2, 3)");
  pair(c23);

  std::optional<std::string> bad_seed;
  try {
    o.seed = default_seed();
  } catch (const Error& e) {
    bad_seed = e.what();
  }

  auto* sample = app.add_subcommand("sample", "Random members of S(sigma)");
  input(sample);
  need_m(sample);
  sample->add_option("--seed", o.seed, "Seed (default REDUCED_STATE_SEED or 0)");
  sample->add_option("--trials", o.trials, "Number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--mix", o.mix, "Convex-combination breadth")->check(CLI::PositiveNumber);
  sample->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* search = app.add_subcommand("search", "Random search for the best rank-k marginal fit");
  input(search);
  need_m(search);
  search->add_option("--k", o.k, "Rank bound")->required()->check(CLI::PositiveNumber);
  search->add_option("--p", o.p, "Schatten exponent (number or inf)");
  search->add_option("--seed", o.seed, "Seed (default REDUCED_STATE_SEED or 0)");
  search->add_option("--trials", o.trials, "Random states tried")->check(CLI::PositiveNumber);
  search->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* demo = app.add_subcommand("demo-s5", "Worked answers for S(I_3/3) with m = 2");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream cli_err;
    const int code = app.exit(e, out, cli_err);
    if (code == 0) return ok;
    report_error(err, "usage", e.what());
    return usage;
  }

  try {
    const bool seeded = (sample->parsed() && sample->count("--seed") > 0) ||
                        (search->parsed() && search->count("--seed") > 0);
    if (bad_seed && (sample->parsed() || search->parsed()) && !seeded)
      fail(ErrorKind::format, *bad_seed);
    Runner runner(o, out);
    if (validate->parsed()) return runner.validate();
    if (ptrace->parsed()) return runner.ptrace();
    if (purify->parsed()) return runner.purify();
    if (construct->parsed()) return runner.construct();
    if (approx->parsed()) return runner.approx();
    if (extreme->parsed()) return runner.extreme();
    if (split->parsed()) return runner.split();
    if (feasible->parsed()) return runner.feasible();
    if (compat->parsed()) return runner.compat();
    if (spectra->parsed()) return runner.spectra_construct();
    if (c23->parsed()) return runner.construct23();
    if (sample->parsed()) return runner.sample();
    if (search->parsed()) return runner.search();
    if (demo->parsed()) return runner.demo_s5();
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return invalid;
  }
  report_error(err, "usage", "no subcommand");
  return usage;
}

}  // namespace redstate::cli
