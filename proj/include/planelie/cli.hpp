#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "planelie/autmap.hpp"
#include "planelie/liestruct.hpp"
#include "planelie/serialize.hpp"
#include "planelie/verify.hpp"

namespace planelie::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kParseError = 2;

struct Options {
  bool json = false;
  std::uint64_t seed = 1;
  std::optional<std::uint32_t> degree_cap;
  std::optional<std::size_t> iter_cap;
  std::optional<unsigned> trials;
  std::string basis_file;
  std::size_t dim_cap = 1000;
  unsigned factors = 3;
  unsigned deg_bound = 3;
  std::uint32_t degree_budget = kDefaultDegreeBudget;
  std::vector<std::string> inputs;
};

namespace detail {

inline std::vector<VectorField> read_fields(std::istream& in) {
  std::vector<VectorField> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    out.push_back(parse_vector_field(line));
  }
  return out;
}

inline std::vector<VectorField> read_basis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open basis file '" + path + "'");
  return read_fields(in);
}

inline AlgebraKind parse_kind(const std::string& s) {
  for (auto k : {AlgebraKind::Sl2, AlgebraKind::Saff2, AlgebraKind::Aff2, AlgebraKind::IntroSl2})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::InvalidArgument,
              "unknown algebra '" + s + "'; expected sl2, saff2, aff2 or intro_sl2");
}

inline std::string factor_text(const ElementaryFactor& factor) {
  if (const auto* a = std::get_if<AffineFactor>(&factor)) {
    const auto& m = a->matrix;
    return "affine (" + to_string(m[0][0]) + "*x + " + to_string(m[0][1]) + "*y + " +
           to_string(a->translation[0]) + ", " + to_string(m[1][0]) + "*x + " + to_string(m[1][1]) +
           "*y + " + to_string(a->translation[1]) + ")";
  }
  const auto& t = std::get<TriangularFactor>(factor);
  if (t.var == Var::X) return "triangular (x, y + " + to_string(t.p) + ")";
  return "triangular (x + " + to_string(t.p) + ", y)";
}

struct Command {
  std::string help;
  std::string usage;  // names of the positional inputs; empty if none
  std::function<void(Options&, std::ostream&, int&)> run;
  bool inputs_required = true;  // read them from stdin when none are given
};

class Runner {
 public:
  Runner(Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  const std::string& input(std::size_t k) const {
    if (k >= opt_.inputs.size())
      throw Error(ErrorCode::InvalidArgument, "missing input #" + std::to_string(k + 1));
    return opt_.inputs[k];
  }

  void poly(const Poly& p, const char* key = "poly") {
    if (opt_.json)
      out_ << Json{{key, to_string(p)}}.dump(2) << "\n";
    else
      out_ << to_string(p) << "\n";
  }

  void field(const VectorField& d) {
    if (opt_.json)
      out_ << Json{{"field", to_string(d)}}.dump(2) << "\n";
    else
      out_ << to_string(d) << "\n";
  }

  void fields(const std::vector<VectorField>& ds) {
    if (opt_.json) {
      out_ << Json{{"fields", fields_json(ds)}}.dump(2) << "\n";
      return;
    }
    for (const auto& d : ds) out_ << to_string(d) << "\n";
  }

  void polys(const std::vector<Poly>& ps) {
    if (opt_.json) {
      Json arr = Json::array();
      for (const auto& p : ps) arr.push_back(to_string(p));
      out_ << Json{{"basis", arr}}.dump(2) << "\n";
      return;
    }
    for (const auto& p : ps) out_ << to_string(p) << "\n";
  }

  void map(const PolyMap& m) {
    if (opt_.json)
      out_ << Json{{"f", to_string(m.f)}, {"g", to_string(m.g)}}.dump(2) << "\n";
    else
      out_ << to_string(m) << "\n";
  }

 private:
  Options& opt_;
  std::ostream& out_;
};

inline void print_report(const ClassificationReport& r, std::ostream& out) {
  out << "type: " << to_string(r.type_tag) << "\n";
  out << "closed: " << (r.closed ? "true" : "false") << "\n";
  out << "dim: " << r.dim << "\n";
  if (!r.radical_basis.empty()) {
    out << "radical:\n";
    for (const auto& d : r.radical_basis) out << "  " << to_string(d) << "\n";
  }
  if (!r.levi_basis.empty()) {
    out << "levi (e, h, f):\n";
    for (const auto& d : r.levi_basis) out << "  " << to_string(d) << "\n";
  }
  if (r.recovered_map)
    out << "recovered map: " << to_string(r.recovered_map->f()) << " ; "
        << to_string(r.recovered_map->g()) << "  (jac " << to_string(r.recovered_map->jac())
        << ")\n";
  if (!r.diagnostics.empty()) {
    out << "diagnostics:\n";
    for (const auto& d : r.diagnostics) out << "  " << d << "\n";
  }
}

inline std::vector<VectorField> input_fields(const Options& opt) {
  std::vector<VectorField> out;
  if (!opt.basis_file.empty()) out = read_basis_file(opt.basis_file);
  for (const auto& s : opt.inputs) out.push_back(parse_vector_field(s));
  return out;
}

inline std::map<std::string, Command> commands() {
  std::map<std::string, Command> c;
  auto with = [](auto body) {
    return [body](Options& opt, std::ostream& out, int& status) {
      Runner r(opt, out);
      body(opt, r, out, status);
    };
  };

  c["bracket"] = {"Poisson bracket {f, g}", "F G", with([](Options&, Runner& r, std::ostream&, int&) {
                    r.poly(poisson_bracket(parse_poly(r.input(0)), parse_poly(r.input(1))));
                  })};
  c["jac"] = {"Jacobian determinant of (f, g)", "F G",
              with([](Options&, Runner& r, std::ostream&, int&) {
                r.poly(jacobian_det(parse_poly(r.input(0)), parse_poly(r.input(1))));
              })};
  c["mu"] = {"Hamiltonian field D_h", "H", with([](Options&, Runner& r, std::ostream&, int&) {
               r.field(mu(parse_poly(r.input(0))));
             })};
  c["div"] = {"divergence of a field", "D", with([](Options&, Runner& r, std::ostream&, int&) {
                r.poly(divergence(parse_vector_field(r.input(0))));
              })};
  c["apply"] = {"D(h)", "D H", with([](Options&, Runner& r, std::ostream&, int&) {
                  r.poly(apply(parse_vector_field(r.input(0)), parse_poly(r.input(1))));
                })};
  c["vbracket"] = {"Lie bracket of two fields", "D1 D2",
                   with([](Options&, Runner& r, std::ostream&, int&) {
                     r.field(vf_bracket(parse_vector_field(r.input(0)), parse_vector_field(r.input(1))));
                   })};
  c["compose"] = {"p(f, g)", "P MAP", with([](Options&, Runner& r, std::ostream&, int&) {
                    r.poly(compose(parse_poly(r.input(0)), parse_poly_map(r.input(1))));
                  })};
  c["integrate"] = {"h with D_h = D and h(0,0) = 0", "D",
                    with([](Options&, Runner& r, std::ostream&, int&) {
                      r.poly(integrate_hamiltonian(parse_vector_field(r.input(0))));
                    })};
  c["rescale"] = {"graded rescale s(t) of h", "T H",
                  with([](Options&, Runner& r, std::ostream&, int&) {
                    r.poly(graded_rescale(parse_scalar(r.input(0)), parse_poly(r.input(1))));
                  })};
  c["pfg"] = {"basis of <1, f, g, f^2, fg, g^2>", "F G",
              with([](Options&, Runner& r, std::ostream&, int&) {
                r.polys(p_fg_basis(parse_poly(r.input(0)), parse_poly(r.input(1))).basis());
              })};
  c["centralizer"] = {"{h : deg h <= degree-cap, {h, f} = 0 for all inputs}", "F...",
                      with([](Options& opt, Runner& r, std::ostream&, int&) {
                        std::vector<Poly> fs;
                        for (const auto& s : opt.inputs) fs.push_back(parse_poly(s));
                        r.polys(centralizer_upto(fs, opt.degree_cap.value_or(4)).basis());
                      })};
  c["closure"] = {"Lie closure in P of the inputs", "F...",
                  with([](Options& opt, Runner&, std::ostream& out, int&) {
                    std::vector<Poly> gens;
                    for (const auto& s : opt.inputs) gens.push_back(parse_poly(s));
                    const ClosureResult res = lie_closure(gens, opt.degree_cap.value_or(10), opt.dim_cap);
                    const std::string status = res.closed() ? "Closed" : "CapExceeded";
                    if (opt.json) {
                      Json basis = Json::array();
                      for (const auto& p : res.span.basis()) basis.push_back(to_string(p));
                      out << Json{{"status", status}, {"dim", res.span.dim()}, {"detail", res.detail},
                                  {"basis", basis}}.dump(2)
                          << "\n";
                      return;
                    }
                    out << "status: " << status << "\n";
                    if (!res.detail.empty()) out << "detail: " << res.detail << "\n";
                    out << "dim: " << res.span.dim() << "\n";
                    for (const auto& p : res.span.basis()) out << "  " << to_string(p) << "\n";
                  })};
  c["class"] = {"divergence class of a field", "D",
                with([](Options& opt, Runner& r, std::ostream& out, int&) {
                  const FieldClass fc = vf_class(parse_vector_field(r.input(0)));
                  Json j;
                  if (std::holds_alternative<DivergenceZero>(fc)) {
                    j = {{"class", "DivergenceZero"}};
                  } else if (const auto* c = std::get_if<ConstantDivergence>(&fc)) {
                    j = {{"class", "ConstantDivergence"}, {"c", to_string(c->c)}, {"d0", to_string(c->d0)}};
                  } else {
                    j = {{"class", "GeneralDivergence"},
                         {"divergence", to_string(std::get<GeneralDivergence>(fc).divergence)}};
                  }
                  if (opt.json) {
                    out << j.dump(2) << "\n";
                    return;
                  }
                  out << j["class"].get<std::string>();
                  for (const auto& [k, v] : j.items())
                    if (k != "class") out << " " << k << " = " << v.get<std::string>();
                  out << "\n";
                })};
  c["standard"] = {"standard basis of sl2, saff2, aff2 or intro_sl2", "KIND",
                   with([](Options&, Runner& r, std::ostream&, int&) {
                     r.fields(standard_basis(parse_kind(r.input(0))));
                   })};
  c["etale"] = {"checks that a map has constant nonzero Jacobian", "MAP",
                with([](Options& opt, Runner& r, std::ostream& out, int&) {
                  const PolyMap m = parse_poly_map(r.input(0));
                  const auto a = is_etale(m);
                  if (!a)
                    throw Error(ErrorCode::NotEtale,
                                "Jacobian determinant is " + to_string(jacobian_det(m.f, m.g)));
                  if (opt.json)
                    out << etale_json(*a).dump(2) << "\n";
                  else
                    out << "etale, jac = " << to_string(a->jac()) << "\n";
                })};
  auto etale_input = [](const std::string& s) {
    const PolyMap m = parse_poly_map(s);
    const auto a = is_etale(m);
    if (!a)
      throw Error(ErrorCode::NotEtale, to_string(m) + " has Jacobian determinant " +
                                           to_string(jacobian_det(m.f, m.g)));
    return *a;
  };
  c["conjugate"] = {"alpha(D) for an etale map alpha", "MAP D",
                    with([etale_input](Options&, Runner& r, std::ostream&, int&) {
                      r.field(etale_conjugate(etale_input(r.input(0)), parse_vector_field(r.input(1))));
                    })};
  c["alpha-image"] = {"alpha(saff2) or alpha(aff2) as listed fields", "MAP KIND",
                      with([etale_input](Options&, Runner& r, std::ostream&, int&) {
                        r.fields(alpha_image(etale_input(r.input(0)), parse_kind(r.input(1))));
                      })};
  c["classify"] = {"classifies the span of the given fields (or --basis-file)", "D...",
                   with([](Options& opt, Runner&, std::ostream& out, int&) {
                     const ClassificationReport rep = classify(input_fields(opt));
                     if (opt.json)
                       out << report_json(rep).dump(2) << "\n";
                     else
                       print_report(rep, out);
                   })};
  c["recover"] = {"etale map from a radical basis D_f D_g (inside --basis-file when given)",
                  "D1 D2", with([](Options& opt, Runner& r, std::ostream& out, int&) {
                    VFSubspace l;
                    if (!opt.basis_file.empty()) l = span_reduce(read_basis_file(opt.basis_file));
                    const EtaleMap a = recover_etale(
                        l, {parse_vector_field(r.input(0)), parse_vector_field(r.input(1))});
                    if (opt.json)
                      out << etale_json(a).dump(2) << "\n";
                    else
                      out << to_string(a.f()) << " ; " << to_string(a.g()) << "\n";
                  })};
  c["decide"] = {"decides whether a map is an automorphism and factors it", "MAP",
                 with([](Options& opt, Runner& r, std::ostream& out, int&) {
                   const PolyMap m = parse_poly_map(r.input(0));
                   const AutomorphismDecision d =
                       decide_automorphism(m, opt.degree_cap.value_or(max_degree(m)));
                   if (opt.json) {
                     out << decision_json(d).dump(2) << "\n";
                     return;
                   }
                   if (d.verdict == Verdict::Stuck) {
                     out << "!!! STUCK: etale map with no degree-lowering elementary reduction !!!\n"
                         << "An etale non-automorphism would refute the plane Jacobian conjecture.\n"
                         << "Check the input; if it is correct, keep this output.\n"
                         << "state: " << to_string(d.state) << "\n"
                         << "reason: " << d.reason << "\n";
                     return;
                   }
                   out << to_string(d.verdict) << "\n";
                   if (d.verdict == Verdict::Automorphism)
                     for (const auto& f : d.factorization.factors) out << "  " << factor_text(f) << "\n";
                   else
                     out << "reason: " << d.reason << "\n";
                 })};
  c["invert"] = {"inverse of an automorphism", "MAP",
                 with([](Options&, Runner& r, std::ostream&, int&) {
                   r.map(invert(parse_poly_map(r.input(0))));
                 })};
  c["random-aut"] = {"seeded random tame automorphism", "",
                     with([](Options& opt, Runner& r, std::ostream&, int&) {
                       r.map(random_automorphism(opt.seed, opt.factors, opt.deg_bound, opt.degree_budget));
                     })};
  c["local-finiteness"] = {"bounded local finiteness probe of ad(D) on the probes", "D P...",
                           with([](Options& opt, Runner& r, std::ostream& out, int&) {
                             const VectorField d = parse_vector_field(r.input(0));
                             std::vector<VectorField> probes;
                             for (std::size_t k = 1; k < opt.inputs.size(); ++k)
                               probes.push_back(parse_vector_field(opt.inputs[k]));
                             const LocalFiniteness lf = local_finiteness(
                                 d, probes, opt.degree_cap.value_or(16), opt.iter_cap.value_or(24));
                             const std::string status =
                                 lf.status == FinitenessStatus::Stabilized ? "Stabilized" : "Exceeded";
                             if (opt.json) {
                               out << Json{{"status", status}, {"dim", lf.dim},
                                           {"witness", fields_json(lf.witness)}, {"detail", lf.detail}}
                                          .dump(2)
                                   << "\n";
                               return;
                             }
                             out << status << "\ndim: " << lf.dim << "\n";
                             if (!lf.detail.empty()) out << "detail: " << lf.detail << "\n";
                             for (const auto& w : lf.witness) out << "  " << to_string(w) << "\n";
                           })};
  c["verify"] = {"replays the computable statements as a PASS/FAIL checklist", "ID",
                 with([](Options& opt, Runner& r, std::ostream& out, int& status) {
                   const std::string id = opt.inputs.empty() ? "all" : r.input(0);
                   const auto checks = run_verify(id, VerifyOptions{opt.seed, opt.trials});
                   std::size_t passed = 0;
                   Json arr = Json::array();
                   for (const auto& c : checks) {
                     passed += c.pass;
                     if (opt.json) {
                       arr.push_back({{"group", c.group}, {"check", c.name}, {"pass", c.pass},
                                      {"detail", c.detail}});
                       continue;
                     }
                     out << (c.pass ? "PASS" : "FAIL") << " [" << c.group << "] " << c.name;
                     if (!c.detail.empty()) out << "  (" << c.detail << ")";
                     out << "\n";
                   }
                   if (opt.json)
                     out << Json{{"passed", passed}, {"total", checks.size()}, {"checks", arr}}.dump(2)
                         << "\n";
                   else
                     out << passed << "/" << checks.size() << " PASS\n";
                   if (passed != checks.size()) status = kDomainError;
                 }),
                 false};
  return c;
}

}  // namespace detail

/// Runs one command line (args exclude the program name). Inputs missing
/// from the command line are read from `in`, one per non-empty line.
inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Exact computations with the Poisson algebra and vector fields on the plane",
               "planelie"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_flag("--json", opt.json, "JSON output");
  app.add_option("--seed", opt.seed, "random seed");
  app.add_option("--degree-cap", opt.degree_cap, "degree cap");
  app.add_option("--iter-cap", opt.iter_cap, "iteration cap (local-finiteness)");
  app.add_option("--trials", opt.trials, "number of random trials (verify)");
  app.add_option("--basis-file", opt.basis_file, "file with one vector field per line");
  app.add_option("--dim-cap", opt.dim_cap, "dimension cap (closure)");
  app.add_option("--factors", opt.factors, "number of factors (random-aut)");
  app.add_option("--deg-bound", opt.deg_bound, "factor degree bound (random-aut)");
  app.add_option("--degree-budget", opt.degree_budget, "composite degree budget (random-aut)");

  const auto cmds = detail::commands();
  for (const auto& [name, cmd] : cmds) {
    auto* sub = app.add_subcommand(name, cmd.help);
    if (!cmd.usage.empty()) sub->add_option("inputs", opt.inputs, cmd.usage);
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParseError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const detail::Command& cmd = cmds.at(name);
  if (cmd.inputs_required && !cmd.usage.empty() && opt.inputs.empty() && opt.basis_file.empty()) {
    std::string line;
    while (std::getline(in, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) opt.inputs.push_back(line);
  }

  int status = kOk;
  try {
    cmd.run(opt, out, status);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return status;
}

}  // namespace planelie::cli
