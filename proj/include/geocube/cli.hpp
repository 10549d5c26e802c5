#pragma once

// The geocube command line.  run_cli is the whole program; tools/geocube.cpp
// only forwards argv and the standard streams, so tests can drive it in
// process.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "geocube/corpus.hpp"
#include "geocube/io.hpp"
#include "geocube/products.hpp"
#include "geocube/sign_suite.hpp"

namespace geocube {

namespace cli_detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string slurp(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

inline Coeff coeff_of(const std::string& s) { return s == "z2" ? Coeff::Z2 : Coeff::Z; }

inline void print_groups(std::ostream& os, const CubicalComplex& x, bool co, std::optional<std::size_t> deg, Coeff r,
                         bool with_generators) {
  std::vector<std::size_t> degrees;
  if (deg) {
    degrees.push_back(*deg);
  } else {
    for (int k = 0; k <= x.top_dim(); ++k) degrees.push_back(std::size_t(k));
  }
  for (auto k : degrees) {
    const GroupSummary g = co ? cohomology(x, k, r) : homology(x, k, r);
    os << (co ? "H^" : "H_") << k << " = " << g.format() << "\n";
    if (with_generators && r == Coeff::Z) {
      const Presentation p = co ? cohomology_presentation(x, k) : homology_presentation(x, k);
      for (const auto& v : p.generators()) {
        os << "  ";
        bool first = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (v[i] == 0) continue;
          if (!first) os << (v[i] < 0 ? " - " : " + ");
          else if (v[i] < 0) os << "-";
          Int a = abs(v[i]);
          if (a != 1) os << a << "*";
          os << "[";
          const auto names = x.face_names(FaceRef{k, i});
          for (std::size_t t = 0; t < names.size(); ++t) os << (t ? "," : "") << names[t];
          os << "]";
          first = false;
        }
        os << "\n";
      }
    }
  }
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"geocube: ordered cubical complexes, their (co)homology, products and duality"};
  app.require_subcommand(1);
  app.fallthrough();  // -o may follow the subcommand
  std::string out_path;
  app.add_option("-o,--output", out_path, "write the result to this file instead of standard output");

  // Options shared by several commands.
  std::string file, file2, coeff = "z";
  std::optional<std::size_t> deg;
  bool generators = false;
  auto add_input = [&](CLI::App* c) { c->add_option("file", file, "complex document (default: standard input)"); };
  auto add_coeff = [&](CLI::App* c) {
    c->add_option("--coeff", coeff, "coefficients")->check(CLI::IsMember({"z", "z2"}));
  };

  auto* validate = app.add_subcommand("validate", "check a complex document");
  add_input(validate);

  std::string kind;
  std::optional<std::size_t> pn, pk, pp, pq;
  std::optional<std::uint64_t> seed;
  auto* gen_cmd = app.add_subcommand("gen", "write a generated or built-in complex");
  gen_cmd->add_option("kind", kind,
                      "point, cube, cube-boundary, path, circle, torus, fuzz, or a corpus name (klein, torus-4)")
      ->required();
  gen_cmd->add_option("--n", pn, "dimension for cube and cube-boundary");
  gen_cmd->add_option("--k", pk, "size for path and circle");
  gen_cmd->add_option("--p", pp, "torus width");
  gen_cmd->add_option("--q", pq, "torus height (defaults to p)");
  gen_cmd->add_option("--seed", seed, "seed for fuzz");

  auto* hom = app.add_subcommand("homology", "integer or mod 2 homology");
  add_input(hom);
  add_coeff(hom);
  hom->add_option("--deg", deg, "single degree");
  hom->add_flag("--generators", generators, "also print generating cycles");
  auto* cohom = app.add_subcommand("cohomology", "integer or mod 2 cohomology");
  add_input(cohom);
  add_coeff(cohom);
  cohom->add_option("--deg", deg, "single degree");
  cohom->add_flag("--generators", generators, "also print generating cocycles");

  auto* euler = app.add_subcommand("euler", "Euler characteristic from face counts");
  add_input(euler);
  auto* fclass = app.add_subcommand("fclass", "fundamental class as a chain document");
  add_input(fclass);
  add_coeff(fclass);

  std::string alpha, beta, chain, left, right;
  auto* cup_cmd = app.add_subcommand("cup", "cup product of two cochains");
  add_input(cup_cmd);
  cup_cmd->add_option("--alpha", alpha, "left cochain document")->required();
  cup_cmd->add_option("--beta", beta, "right cochain document")->required();
  auto* cap_cmd = app.add_subcommand("cap", "cap product of a cochain with a chain");
  add_input(cap_cmd);
  cap_cmd->add_option("--alpha", alpha, "cochain document")->required();
  cap_cmd->add_option("--chain", chain, "chain document")->required();

  auto* cross_cmd = app.add_subcommand("cross", "product complex, or the cross product of two chains");
  cross_cmd->add_option("x", file, "first complex")->required();
  cross_cmd->add_option("y", file2, "second complex")->required();
  cross_cmd->add_option("--left", left, "chain on the first complex");
  cross_cmd->add_option("--right", right, "chain on the second complex");

  auto* subdivide = app.add_subcommand("subdivide", "central subdivision");
  add_input(subdivide);
  auto* dual = app.add_subcommand("dual", "dual cochain map into the subdivision");
  add_input(dual);
  add_coeff(dual);
  dual->add_option("--alpha", alpha, "cochain document")->required();
  auto* icheck = app.add_subcommand("intersect-check", "check psi is a chain map and I(psi) = id");
  add_input(icheck);
  add_coeff(icheck);
  auto* pd = app.add_subcommand("pd-check", "Poincare duality in every degree");
  add_input(pd);
  auto* uct = app.add_subcommand("uct-check", "universal coefficient theorem");
  add_input(uct);
  uct->add_option("--deg", deg, "single degree");
  auto* kun = app.add_subcommand("kunneth", "compare product homology with the Kunneth formula");
  kun->add_option("x", file, "first complex")->required();
  kun->add_option("y", file2, "second complex")->required();

  std::uint64_t suite_seed = 0;
  std::size_t instances = 1000, max_dim = 5;
  auto* suite = app.add_subcommand("sign-suite", "randomized orientation sign identities");
  suite->add_option("--seed", suite_seed, "random seed")->required();
  suite->add_option("--instances", instances, "instances per property");
  suite->add_option("--max-dim", max_dim, "largest space dimension")->check(CLI::Range(1, 12));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << " (try --help)\n";
    return 2;
  }

  std::ostringstream os;
  bool failed = false;  // a check command ran but reported a failure
  try {
    auto load = [&](const std::string& path) { return parse_complex(slurp(path, in)); };
    const Coeff r = coeff_of(coeff);

    if (*validate) {
      const auto x = load(file);
      os << "valid: " << (x.name().empty() ? "(unnamed)" : x.name()) << ", dim " << x.top_dim() << ", faces";
      for (int k = 0; k <= x.top_dim(); ++k) os << (k ? "/" : " ") << x.count(std::size_t(k));
      os << "\n";
    } else if (*gen_cmd) {
      auto need = [&](const std::optional<std::size_t>& v, const char* flag) {
        if (!v) throw UsageError(std::string("gen ") + kind + " needs " + flag);
        return *v;
      };
      CubicalComplex x;
      if (kind == "point") x = gen::point();
      else if (kind == "cube") x = gen::standard_cube(need(pn, "--n"));
      else if (kind == "cube-boundary") x = gen::cube_boundary(need(pn, "--n"));
      else if (kind == "path") x = gen::path(need(pk, "--k"));
      else if (kind == "circle") x = gen::circle(need(pk, "--k"));
      else if (kind == "torus") {
        const auto p = need(pp, "--p");
        x = gen::torus_grid(p, pq.value_or(p));
      } else if (kind == "fuzz") {
        if (!seed) throw UsageError("gen fuzz needs --seed");
        x = gen::fuzz(*seed);
      } else {
        x = corpus_load(kind);
      }
      os << write_complex(x);
    } else if (*hom || *cohom) {
      print_groups(os, load(file), cohom->parsed(), deg, r, generators);
    } else if (*euler) {
      os << "chi = " << euler_characteristic(load(file)) << "\n";
    } else if (*fclass) {
      const auto x = load(file);
      os << write_chain(x, fundamental_class(x, r));
    } else if (*cup_cmd) {
      const auto x = load(file);
      const auto a = parse_cochain(x, slurp(alpha, in));
      const auto b = parse_cochain(x, slurp(beta, in));
      os << write_cochain(x, cup(x, a, b));
    } else if (*cap_cmd) {
      const auto x = load(file);
      const auto a = parse_cochain(x, slurp(alpha, in));
      const auto c = parse_chain(x, slurp(chain, in));
      os << write_chain(x, cap(x, a, c));
    } else if (*cross_cmd) {
      const auto x = load(file);
      const auto y = load(file2);
      const auto p = product(x, y);
      if (left.empty() != right.empty()) throw UsageError("cross needs both --left and --right, or neither");
      if (left.empty()) {
        os << write_complex(p);
      } else {
        const auto c = parse_chain(x, slurp(left, in));
        const auto d = parse_chain(y, slurp(right, in));
        os << write_chain(p, cross(x, y, p, c, d));
      }
    } else if (*subdivide) {
      const auto x = load(file);
      SubdividedComplex sd(x);
      os << write_complex(sd.complex());
    } else if (*dual) {
      const auto x = load(file);
      SubdividedComplex sd(x);
      DualBasis db(sd, r);
      os << write_chain(sd.complex(), db.psi(parse_cochain(x, slurp(alpha, in))));
    } else if (*icheck) {
      const auto x = load(file);
      SubdividedComplex sd(x);
      DualBasis db(sd, r);
      const std::size_t total = x.face_total();
      const auto chain_bad = psi_chain_map_failures(db);
      const auto id_bad = intersection_identity_failures(db);
      os << "psi chain map: " << (chain_bad ? "FAIL" : "ok") << " (" << total - chain_bad << "/" << total
         << " faces)\n";
      os << "I(psi(F*)) = F*: " << (id_bad ? "FAIL" : "ok") << " (" << total - id_bad << "/" << total << " faces)\n";
      failed = chain_bad || id_bad;
      os << "intersect-check: " << (failed ? "FAIL" : "PASS") << "\n";
    } else if (*pd) {
      const auto rep = pd_check(load(file));
      failed = !rep.all_iso();
      os << rep.format();
    } else if (*uct) {
      const auto x = load(file);
      bool ok = true;
      std::vector<std::size_t> degrees;
      if (deg) degrees.push_back(*deg);
      else
        for (int k = 0; k <= x.top_dim(); ++k) degrees.push_back(std::size_t(k));
      for (auto k : degrees) {
        const auto rep = uct_check(x, k);
        ok = ok && rep.passed();
        os << rep.format();
      }
      failed = !ok;
      os << "uct-check: " << (ok ? "PASS" : "FAIL") << "\n";
    } else if (*kun) {
      const auto rep = kunneth(load(file), load(file2));
      failed = !rep.passed();
      os << rep.format();
    } else if (*suite) {
      const auto rep = run_sign_suite(suite_seed, instances, max_dim);
      failed = !rep.all_passed();
      os << rep.format();
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (out_path.empty()) {
    out << os.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "usage: cannot write " << out_path << "\n";
      return 2;
    }
    f << os.str();
  }
  return failed ? 1 : 0;
}

}  // namespace geocube
