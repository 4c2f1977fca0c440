#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "carlitz/hyper.hpp"
#include "carlitz/text.hpp"

namespace carlitz::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitRefusal = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default field-config file.
inline constexpr const char* kFieldConfigEnv = "CARLITZ_FIELD_CONFIG";

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline FieldPtr field_from_config_file(const std::string& path) {
  std::string text = read_file(path), cleaned;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    cleaned += line + " ";
  }
  return field_from_keys(carlitz::detail::key_values(cleaned));
}

struct Options {
  bool json = false;
  std::int64_t q = 0;
  int m = 1;
  std::string field_config;
  /// Field the command ended up using, echoed in JSON output.
  mutable FieldPtr last;

  FieldPtr field() const {
    if (q != 0) return last = Field::for_q(q, m);
    if (!field_config.empty()) return last = field_from_config_file(field_config);
    if (const char* env = std::getenv(kFieldConfigEnv); env && *env) return last = field_from_config_file(env);
    return last = Field::for_q(2, m);
  }
};

inline json field_json(const Field& f) {
  const auto& p = f.params();
  return {{"p", p.p}, {"v", p.v}, {"m", p.m}, {"q", f.q()}, {"modulus", p.modulus}};
}

inline std::string str(const PerfSeries& s) { return s.to_string(); }

}  // namespace detail

/// Executes one command line (without the program name). Output goes to
/// `out`, diagnostics to `err`. Returns 0, 1 (refusal) or 2 (usage).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::str;
  CLI::App app{"Carlitz calculus over perfected Laurent series", "carlitz"};
  app.require_subcommand(1);
  app.fallthrough();
  detail::Options opt;
  app.add_flag("--json", opt.json, "machine-readable output");
  app.add_option("--q", opt.q, "field size q = p^v");
  app.add_option("--m", opt.m, "constant-field extension degree");
  app.add_option("--field-config", opt.field_config, "field-config file (key=value pairs)");

  json result;
  std::string text;
  std::function<void()> action;
  int status = kExitOk;

  auto* c_bracket = app.add_subcommand("bracket", "[n] = x^{q^n} - x, or [inf] = -x");
  int b_n = 0;
  bool b_inf = false;
  c_bracket->add_option("--n", b_n, "index");
  c_bracket->add_flag("--inf", b_inf, "the index infinity");
  c_bracket->callback([&] {
    action = [&] {
      auto f = opt.field();
      auto idx = b_inf ? BracketIndex::infinity() : BracketIndex::finite(b_n);
      PerfSeries v = bracket(f, idx);
      result = {{"verb", "bracket"}, {"index", idx.to_string()}, {"value", str(v)}};
      text = str(v);
    };
  });

  auto* c_fact = app.add_subcommand("factorial", "Carlitz factorials D_n and L_n");
  int f_n = 0;
  std::string f_kind = "D";
  c_fact->add_option("--n", f_n, "index")->required();
  c_fact->add_option("--kind", f_kind, "D or L")->check(CLI::IsMember({"D", "L"}));
  c_fact->callback([&] {
    action = [&] {
      auto f = opt.field();
      PerfSeries v = f_kind == "D" ? carlitz_D(f, f_n) : carlitz_L(f, f_n);
      result = {{"verb", "factorial"}, {"kind", f_kind}, {"n", f_n}, {"value", str(v)},
                {"valuation", v.valuation().value.to_string()}};
      text = str(v);
    };
  });

  auto* c_poch = app.add_subcommand("pochhammer", "<a>_m, or Thakur's (alpha)_m");
  std::string p_a;
  int p_m = 0;
  std::optional<int> p_alpha;
  std::string p_mode = "recurrent";
  c_poch->add_option("--a", p_a, "parameter (series literal)");
  c_poch->add_option("--alpha", p_alpha, "integer Thakur parameter");
  c_poch->add_option("--m", p_m, "index")->required();
  c_poch->add_option("--mode", p_mode, "direct or recurrent")->check(CLI::IsMember({"direct", "recurrent"}));
  c_poch->callback([&] {
    action = [&] {
      auto f = opt.field();
      PerfSeries v = PerfSeries::zero(f);
      if (p_alpha) {
        v = pochhammer_thakur(f, *p_alpha, p_m);
      } else {
        if (p_a.empty()) throw ParameterError("pochhammer needs --a or --alpha");
        v = pochhammer(parse_series(p_a, f), p_m,
                       p_mode == "direct" ? PochhammerMode::Direct : PochhammerMode::Recurrent);
      }
      result = {{"verb", "pochhammer"}, {"m", p_m}, {"value", str(v)}};
      text = str(v);
    };
  });

  auto* c_norm = app.add_subcommand("op-normalize", "normal form of an operator expression");
  std::string n_expr, n_conv = "standard", n_strat = "leftmost";
  int n_vars = 1;
  std::uint64_t n_seed = 0;
  c_norm->add_option("--expr", n_expr, "operator expression")->required();
  c_norm->add_option("--nvars", n_vars, "number of delta generators");
  c_norm->add_option("--convention", n_conv, "standard or alt")->check(CLI::IsMember({"standard", "alt"}));
  c_norm->add_option("--strategy", n_strat, "rewriting order")->check(CLI::IsMember({"leftmost", "rightmost", "random"}));
  c_norm->add_option("--seed", n_seed, "seed for the random strategy");
  c_norm->callback([&] {
    action = [&] {
      auto f = opt.field();
      auto conv = n_conv == "alt" ? Convention::Alt : Convention::Standard;
      auto strat = n_strat == "rightmost" ? Strategy::Rightmost : n_strat == "random" ? Strategy::Random : Strategy::Leftmost;
      NormalForm nf = normalize(parse_operator(n_expr, f, n_vars), conv, strat, n_seed);
      const int deg = filtration_degree(nf);
      result = {{"verb", "op-normalize"}, {"convention", n_conv}, {"normal_form", to_string(nf)},
                {"linear", is_linear(nf)}, {"terms", nf.terms.size()},
                {"filtration_degree", deg == kNegInfDegree ? json("-inf") : json(deg)}};
      text = to_string(nf);
    };
  });

  auto* c_apply = app.add_subcommand("op-apply", "apply an operator to a serialized function");
  std::string a_expr, a_file;
  c_apply->add_option("--expr", a_expr, "operator expression")->required();
  c_apply->add_option("--function", a_file, "MultiFunction file")->required();
  c_apply->callback([&] {
    action = [&] {
      MultiFunction u = parse_multifunction(detail::read_file(a_file));
      opt.last = u.field();
      MultiFunction r = op_apply(parse_operator(a_expr, u.field(), u.n()), u);
      text = serialize(r);
      result = {{"verb", "op-apply"}, {"function", text}};
    };
  });

  auto* c_cauchy = app.add_subcommand("cauchy-solve", "solve a Cauchy problem file");
  std::string c_file;
  c_cauchy->add_option("problem", c_file, "problem file")->required();
  c_cauchy->callback([&] {
    action = [&] {
      std::istringstream is(detail::read_file(c_file));
      auto pr = parse_cauchy_problem(is, opt.field());
      opt.last = pr.field;
      auto eq = pr.equation();
      const int imax = pr.imax.value_or(std::max(pr.trunc_i, recommend_imax(eq).value_or(pr.trunc_i)));
      auto rep = admissibility_check(eq, imax);
      if (!rep.ok())
        throw RefusalError(rep.status == AdmissibilityReport::Status::Failure ? "inadmissible" : "indeterminate",
                           "Q([i]) vanishes at " + tuple_to_string(rep.offending));
      MultiFunction u = cauchy_solve(eq, pr.initial_data(), pr.trunc_m, pr.trunc_i);
      const bool res_zero = residual(eq, u).is_zero_at_precision();
      text = serialize(u);
      result = {{"verb", "cauchy-solve"}, {"imax", imax}, {"mu_valuation", rep.max_valuation.to_string()},
                {"residual_zero", res_zero}, {"solution", text}};
    };
  });

  std::vector<std::string> h_a, h_b;
  std::vector<int> h_alpha, h_beta;
  std::string h_z, h_file, h_form = "product";
  int h_M = 5;
  auto hyper_opts = [&](CLI::App* c) {
    c->add_option("file", h_file, "parameter file");
    c->add_option("--a", h_a, "upper parameter (repeatable)");
    c->add_option("--b", h_b, "lower parameter (repeatable)");
    c->add_option("--alpha", h_alpha, "integer Thakur upper parameter (repeatable)");
    c->add_option("--beta", h_beta, "integer Thakur lower parameter (repeatable)");
    c->add_option("--M", h_M, "truncation");
  };
  auto hyper_problem = [&] {
    HyperProblem pr;
    if (!h_file.empty()) {
      std::istringstream is(detail::read_file(h_file));
      pr = parse_hyper_problem(is, opt.field());
    } else {
      pr.field = opt.field();
      pr.M = h_M;
    }
    pr.a.insert(pr.a.end(), h_a.begin(), h_a.end());
    pr.b.insert(pr.b.end(), h_b.begin(), h_b.end());
    pr.alphas.insert(pr.alphas.end(), h_alpha.begin(), h_alpha.end());
    pr.betas.insert(pr.betas.end(), h_beta.begin(), h_beta.end());
    if (!h_z.empty()) pr.z = h_z;
    opt.last = pr.field;
    return pr;
  };
  auto params_of = [](const HyperProblem& pr) {
    if (!pr.alphas.empty() || !pr.betas.empty()) return thakur_as_params(pr.field, pr.alphas, pr.betas);
    HyperParams p;
    for (const auto& s : pr.a) p.a.push_back(parse_series(s, pr.field));
    for (const auto& s : pr.b) p.b.push_back(parse_series(s, pr.field));
    if (p.a.empty() && p.b.empty()) throw ParameterError("no hypergeometric parameters given");
    return p;
  };

  auto* c_heval = app.add_subcommand("hyper-eval", "evaluate rFs at z");
  hyper_opts(c_heval);
  c_heval->add_option("--z", h_z, "argument (series literal)");
  c_heval->callback([&] {
    action = [&] {
      auto pr = hyper_problem();
      if (pr.z.empty()) throw ParameterError("hyper-eval needs z");
      auto p = params_of(pr);
      auto cb = convergence_bound(p);
      PerfSeries v = hyper_eval(p, parse_series(pr.z, pr.field), pr.M);
      result = {{"verb", "hyper-eval"}, {"M", pr.M}, {"threshold", cb.threshold.to_string()}, {"value", str(v)}};
      text = str(v);
    };
  });

  auto* c_hres = app.add_subcommand("hyper-residual", "apply the hypergeometric operator to the truncated series");
  hyper_opts(c_hres);
  c_hres->add_option("--form", h_form, "product, gauss or thakur")->check(CLI::IsMember({"product", "gauss", "thakur"}));
  c_hres->callback([&] {
    action = [&] {
      auto pr = hyper_problem();
      MultiFunction r = h_form == "thakur"
                            ? hyper_thakur_residual(pr.field, pr.alphas, pr.betas, pr.M)
                            : hyper_residual(params_of(pr), pr.M, h_form == "gauss" ? HyperForm::Gauss : HyperForm::Product);
      const bool zero = r.is_zero_at_precision();
      text = std::string(zero ? "ZERO" : "NONZERO") + " on m <= " + std::to_string(r.trunc_m());
      result = {{"verb", "hyper-residual"}, {"form", h_form}, {"zero", zero}, {"known_up_to", r.trunc_m()},
                {"residual", serialize(r)}};
      if (!zero) status = kExitRefusal;
    };
  });

  auto* c_id = app.add_subcommand("identity-check", "seeded sweep of a contiguous relation");
  std::string i_id;
  std::uint64_t i_seed = 0;
  int i_trials = 50, i_index = 5;
  c_id->add_option("--id", i_id, "5.3 ... 5.8")->required()->check(CLI::IsMember(contiguous_ids()));
  c_id->add_option("--seed", i_seed, "random seed");
  c_id->add_option("--trials", i_trials, "number of random draws");
  c_id->add_option("--index", i_index, "m for symbol identities, M for function identities");
  c_id->callback([&] {
    action = [&] {
      auto f = opt.field();
      std::mt19937_64 rng(i_seed);
      int passed = 0;
      json draws = json::array();
      const int lo = (i_id == "5.5" || i_id == "5.6") ? 1 : 0;
      for (int t = 0; t < i_trials; ++t) {
        HyperParams p = random_contiguous_params(f, i_id, rng);
        bool ok = true;
        if (i_id == "5.7" || i_id == "5.8") {
          ok = contiguous_check(i_id, p, i_index).holds;
        } else {
          for (int m = lo; m <= i_index && ok; ++m) ok = contiguous_check(i_id, p, m).holds;
        }
        passed += ok ? 1 : 0;
        json params = json::array();
        for (const auto& v : p.a) params.push_back(str(v));
        for (const auto& v : p.b) params.push_back(str(v));
        draws.push_back({{"params", params}, {"holds", ok}});
      }
      const bool all = passed == i_trials;
      text = std::string(all ? "PASS " : "FAIL ") + std::to_string(passed) + "/" + std::to_string(i_trials);
      result = {{"verb", "identity-check"}, {"id", i_id}, {"seed", i_seed}, {"passed", passed},
                {"trials", i_trials}, {"draws", draws}};
      if (!all) status = kExitRefusal;
    };
  });

  auto* c_dim = app.add_subcommand("dim-count", "filtration counts and fitted growth degree");
  std::string d_kind = "gamma";
  int d_vars = 1, d_numax = 12;
  c_dim->add_option("--kind", d_kind, "gamma, qh or fhat")->check(CLI::IsMember({"gamma", "qh", "fhat"}));
  c_dim->add_option("--nvars", d_vars, "n");
  c_dim->add_option("--numax", d_numax, "largest ν");
  c_dim->callback([&] {
    action = [&] {
      std::vector<std::pair<int, std::int64_t>> samples;
      for (int nu = 0; nu <= d_numax; ++nu) {
        std::int64_t v = d_kind == "gamma" ? gamma_dim(d_vars, nu) : d_kind == "qh" ? qh_lower_count(d_vars, nu) : fhat_count(d_vars, nu);
        samples.emplace_back(nu, v);
      }
      auto fit = gk_fit(samples);
      json counts = json::array();
      std::ostringstream os;
      for (const auto& [nu, v] : samples) {
        counts.push_back(v);
        os << nu << " " << v << "\n";
      }
      os << "degree " << (fit ? std::to_string(fit->degree) : std::string("none"));
      text = os.str();
      result = {{"verb", "dim-count"}, {"kind", d_kind}, {"n", d_vars}, {"counts", counts},
                {"degree", fit ? json(fit->degree) : json(nullptr)}, {"period", fit ? json(fit->period) : json(nullptr)}};
    };
  });

  auto* c_rt = app.add_subcommand("parse-roundtrip", "print, reparse and compare an expression");
  std::string r_expr;
  bool r_operator = false;
  int r_vars = 1;
  c_rt->add_option("--expr", r_expr, "series or operator expression")->required();
  c_rt->add_flag("--operator", r_operator, "treat as an operator expression");
  c_rt->add_option("--nvars", r_vars, "number of delta generators");
  c_rt->callback([&] {
    action = [&] {
      auto f = opt.field();
      ParseNode tree = parse_tree(r_expr);
      const std::string printed = tree.to_string();
      const bool tree_ok = parse_tree(printed) == tree;
      std::string canonical;
      bool value_ok = false;
      if (r_operator) {
        NormalForm nf = normalize(parse_operator(r_expr, f, r_vars));
        canonical = to_string(nf);
        value_ok = normalize(parse_operator(canonical, f, r_vars)) == nf;
      } else {
        PerfSeries v = parse_series(r_expr, f);
        canonical = str(v);
        value_ok = parse_series(canonical, f).identical(v);
      }
      text = printed + "\n" + canonical;
      result = {{"verb", "parse-roundtrip"}, {"tree", printed}, {"canonical", canonical},
                {"tree_stable", tree_ok}, {"value_stable", value_ok}};
      if (!tree_ok || !value_ok) status = kExitRefusal;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  auto refuse = [&](const std::string& code, const std::string& msg, int rc) {
    if (opt.json) out << json{{"status", "refused"}, {"reason", code}, {"message", msg}}.dump(2) << "\n";
    else err << "refused (" << code << "): " << msg << "\n";
    return rc;
  };
  try {
    action();
  } catch (const SyntaxError& e) {
    return refuse(e.code(), e.what(), kExitUsage);
  } catch (const ParameterError& e) {
    return refuse(e.code(), e.what(), kExitUsage);
  } catch (const Error& e) {
    return refuse(e.code(), e.what(), kExitRefusal);
  }
  if (opt.json) {
    result["status"] = status == kExitOk ? "ok" : "failed";
    if (opt.last) result["field"] = detail::field_json(*opt.last);
    out << result.dump(2) << "\n";
  } else {
    out << text << (text.empty() || text.back() != '\n' ? "\n" : "");
  }
  return status;
}

}  // namespace carlitz::cli
