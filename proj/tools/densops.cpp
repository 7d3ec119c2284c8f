// densops: differential operators on densities from the command line.
#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "densops/error.hpp"
#include "densops/json_io.hpp"
#include "densops/parse.hpp"
#include "densops/verify.hpp"

using namespace densops;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Globals {
  int dim = 1;
  bool json_out = false;
  std::string output;
};

std::size_t u(int i) { return static_cast<std::size_t>(i); }

/// Inline JSON when the argument starts with '{' or '[', "-" for stdin, a file path otherwise.
json load_json(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return json::parse(arg);
  if (arg == "-") return json::parse(std::cin);
  std::ifstream in(arg);
  if (!in) throw Error("cannot open '" + arg + "'");
  return json::parse(in);
}

std::string index_label(const char* base, std::initializer_list<int> upper, std::initializer_list<int> lower,
                        int n) {
  auto name = [n](int i) { return i == n ? std::string("0") : std::to_string(i + 1); };
  std::string s = base;
  if (upper.size() > 0) {
    s += "^";
    for (int i : upper) s += name(i);
  }
  if (lower.size() > 0) {
    s += "_";
    for (int i : lower) s += name(i);
  }
  return s;
}

std::string text(const SymbolTriple& st) {
  std::ostringstream out;
  const int n = st.dimension();
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) out << index_label("S", {i, k}, {}, -1) << " = " << to_string(st.S(i, k)) << '\n';
  for (int i = 0; i < n; ++i) out << index_label("B", {i}, {}, -1) << " = " << to_string(st.B[u(i)]) << '\n';
  out << "C = " << to_string(st.C) << '\n';
  return out.str();
}

std::string text(const Christoffel& g, const char* base) {
  std::ostringstream out;
  const int n = g.dimension();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m <= k; ++m)
        if (!g(i, k, m).is_zero()) out << index_label(base, {i}, {k, m}, -1) << " = " << to_string(g(i, k, m)) << '\n';
  if (out.str().empty()) out << "all " << base << " vanish\n";
  return out.str();
}

std::string text(const std::vector<Expr>& v, const char* base, bool upper) {
  std::ostringstream out;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    out << (upper ? index_label(base, {i}, {}, -1) : index_label(base, {}, {i}, -1)) << " = " << to_string(v[u(i)])
        << '\n';
  return out.str();
}

class Cli {
 public:
  Cli() : app_("Differential operators on densities: adjoints, pencils, connections, verification.") {
    app_.require_subcommand(1);
    app_.set_help_all_flag("--help-all", "Expand all help");
    add_adjoint();
    add_compose();
    add_apply();
    add_restrict();
    add_pencil();
    add_example();
    add_extract_connection();
    add_pi();
    add_proj_equiv();
    add_thomas_lift();
    add_levi_civita();
    add_scalar_product();
    add_divergence();
    add_verify();
  }

  int run(int argc, char** argv) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app_.exit(e);
      return code == 0 ? kExitOk : kExitUsage;
    }
    try {
      return action_();
    } catch (const ParseError& e) {
      std::cerr << "parse error at " << e.what() << '\n';
    } catch (const json::exception& e) {
      std::cerr << "invalid JSON: " << e.what() << '\n';
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
    }
    return kExitUsage;
  }

 private:
  CLI::App* command(const char* name, const char* description) {
    CLI::App* sub = app_.add_subcommand(name, description);
    sub->add_option("-n,--dim", g_.dim, "Chart dimension")->check(CLI::Range(1, 16));
    sub->add_flag("--json", g_.json_out, "Print JSON documents instead of text");
    sub->add_option("-o,--output", g_.output, "Write the result to a file instead of stdout");
    return sub;
  }

  void emit(const std::string& text_out, const json& json_out) {
    const std::string s = g_.json_out ? json_out.dump(2) + "\n" : text_out;
    if (g_.output.empty()) {
      std::cout << s;
      return;
    }
    std::ofstream out(g_.output);
    if (!out) throw Error("cannot write '" + g_.output + "'");
    out << s;
  }

  void emit(const DiffOperator& op) { emit(to_string(op) + "\n", to_json(op)); }

  Chart chart() const { return Chart(g_.dim); }

  DiffOperator load_operator(const std::string& arg) const {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && arg[first] == '{') return operator_from_json(json::parse(arg), chart());
    return parse_operator(arg, chart());
  }

  void add_adjoint() {
    auto* sub = command("adjoint", "Adjoint of an operator for the canonical pairing");
    sub->add_option("op", op_a_, "Operator (DSL text or JSON document)")->required();
    sub->callback([this] {
      action_ = [this] {
        emit(op_adjoint(load_operator(op_a_)));
        return kExitOk;
      };
    });
  }

  void add_compose() {
    auto* sub = command("compose", "Normal-ordered composition A o B");
    sub->add_option("a", op_a_, "Left operator")->required();
    sub->add_option("b", op_b_, "Right operator")->required();
    sub->callback([this] {
      action_ = [this] {
        emit(op_compose(load_operator(op_a_), load_operator(op_b_)));
        return kExitOk;
      };
    });
  }

  void add_apply() {
    auto* sub = command("apply", "Apply an operator to a density");
    sub->add_option("op", op_a_, "Operator")->required();
    sub->add_option("--density", doc_a_, "Density document (inline JSON, file, or -)");
    sub->add_option("--weight", weight_, "Weight of a single-term density");
    sub->add_option("--coeff", coeff_, "Coefficient of a single-term density");
    sub->callback([this] {
      action_ = [this] {
        Density d;
        if (!doc_a_.empty()) {
          d = density_from_json(load_json(doc_a_), chart());
        } else if (!coeff_.empty()) {
          d = Density::term(Rational::parse(weight_), parse_expr(coeff_, chart()));
        } else {
          throw Error("give --density or --coeff (with --weight)");
        }
        const Density r = op_apply(load_operator(op_a_), d);
        emit(to_string(r) + "\n", to_json(r));
        return kExitOk;
      };
    });
  }

  void add_restrict() {
    auto* sub = command("restrict", "Pencil member at a fixed weight (w replaced by lambda)");
    sub->add_option("op", op_a_, "Operator")->required();
    sub->add_option("--lambda", weight_, "Weight")->required();
    sub->callback([this] {
      action_ = [this] {
        emit(restrict(load_operator(op_a_), Rational::parse(weight_)));
        return kExitOk;
      };
    });
  }

  void add_pencil() {
    auto* sub = command("pencil", "Self-adjoint normalised pencil through a second-order operator");
    sub->add_option("--op", op_a_, "w-free operator A^{ij} d_i d_j + A^i d_i + A");
    sub->add_option("--lambda0", lambda0_, "Weight on which the operator acts");
    sub->add_option("--input", doc_a_, "Pencil document {A2, A1, A0, lambda0}");
    sub->callback([this] {
      action_ = [this] {
        std::optional<LambdaOperator> l;
        if (!doc_a_.empty()) {
          l.emplace(pencil_input_from_json(load_json(doc_a_), chart()));
        } else {
          if (op_a_.empty() || lambda0_.empty()) throw Error("give --op and --lambda0, or --input");
          l.emplace(load_operator(op_a_), Rational::parse(lambda0_));
        }
        const SymbolTriple st = pencil_symbol(*l);
        const DiffOperator op = build_canonical(st);
        emit(text(st) + "operator = " + to_string(op) + "\n", {{"symbol", to_json(st)}, {"operator", to_json(op)}});
        return kExitOk;
      };
    });
  }

  void add_example() {
    auto* sub = command("example", "The pencil L_X L_Y + ((w - l0)/(2 l0 - 1)) L_[X,Y]");
    sub->add_option("--X", list_a_, "Components of X, one per coordinate")->required();
    sub->add_option("--Y", list_b_, "Components of Y, one per coordinate")->required();
    sub->add_option("--lambda0", lambda0_, "Weight")->required();
    sub->callback([this] {
      action_ = [this] {
        const VectorField x = fields(list_a_);
        const VectorField y = fields(list_b_);
        emit(example_pencil(x, y, Rational::parse(lambda0_)));
        return kExitOk;
      };
    });
  }

  VectorField fields(const std::vector<std::string>& list) const {
    if (static_cast<int>(list.size()) != g_.dim) throw Error("a vector field needs one component per coordinate");
    VectorField x;
    for (const auto& s : list) x.components.push_back(parse_expr(s, chart()));
    return x;
  }

  void add_extract_connection() {
    auto* sub = command("extract-connection", "Connection gamma with S gamma = B from a principal symbol");
    sub->add_option("--op", op_a_, "Second-order operator to read the symbol from");
    sub->add_option("--symbol", doc_a_, "Symbol document {S, B, C}");
    sub->add_option("--s-inverse", doc_b_, "Matrix S^{-1}, required for n > 3");
    sub->callback([this] {
      action_ = [this] {
        SymbolTriple st(g_.dim);
        if (!doc_a_.empty()) {
          st = symbol_from_json(load_json(doc_a_), chart());
        } else if (!op_a_.empty()) {
          st = extract_symbol(load_operator(op_a_));
        } else {
          throw Error("give --op or --symbol");
        }
        std::optional<ExprMatrix> inv;
        if (!doc_b_.empty()) inv = matrix_from_json(load_json(doc_b_), chart());
        const Connection g = kk_extract(st, inv);
        json j = to_json(g);
        j["brans_dicke"] = to_json(brans_dicke(st, g));
        emit(text(g.components, "gamma", false) + "C - B^i gamma_i = " + to_string(brans_dicke(st, g)) + "\n", j);
        return kExitOk;
      };
    });
  }

  Christoffel load_connection() const {
    if (!doc_a_.empty()) return christoffel_from_json(load_json(doc_a_), chart());
    if (!doc_b_.empty()) return levi_civita(metric_from_json(load_json(doc_b_), chart()));
    throw Error("give --christoffel or --metric");
  }

  void add_connection_inputs(CLI::App* sub) {
    sub->add_option("--christoffel", doc_a_, "Christoffel document");
    sub->add_option("--metric", doc_b_, "Metric document; its Levi-Civita connection is used");
  }

  void add_pi() {
    auto* sub = command("pi", "Projectively invariant symbols Pi^i_{km}");
    add_connection_inputs(sub);
    sub->callback([this] {
      action_ = [this] {
        const PiSymbols pi = pi_symbols(load_connection());
        emit(text(pi.symbols(), "Pi"), to_json(pi.symbols()));
        return kExitOk;
      };
    });
  }

  void add_proj_equiv() {
    auto* sub = command("proj-equiv", "Whether two connections share their geodesics up to parametrisation");
    sub->add_option("--first", doc_a_, "Christoffel document")->required();
    sub->add_option("--second", doc_b_, "Christoffel document")->required();
    sub->callback([this] {
      action_ = [this] {
        const Christoffel a = christoffel_from_json(load_json(doc_a_), chart());
        const Christoffel b = christoffel_from_json(load_json(doc_b_), chart());
        const ProjectiveComparison cmp = projectively_equivalent(a, b);
        json j = {{"equivalent", cmp.equivalent}};
        std::string t = std::string("equivalent: ") + (cmp.equivalent ? "yes" : "no") + "\n";
        if (cmp.shift) {
          j["shift"] = to_json(Connection{*cmp.shift})["gamma"];
          t += text(*cmp.shift, "t", false);
        }
        emit(t, j);
        return cmp.equivalent ? kExitOk : kExitFailed;
      };
    });
  }

  void add_thomas_lift() {
    auto* sub = command("thomas-lift", "Thomas connection on the extended chart (text labels vertical as 0)");
    add_connection_inputs(sub);
    sub->callback([this] {
      action_ = [this] {
        const ExtendedChristoffel lift = thomas_lift(pi_symbols(load_connection()));
        const int n = lift.dimension();
        std::ostringstream out;
        for (int a = 0; a <= n; ++a)
          for (int b = 0; b <= n; ++b)
            for (int c = 0; c <= b; ++c)
              if (!lift(a, b, c).is_zero())
                out << index_label("G", {a}, {b, c}, n) << " = " << to_string(lift(a, b, c)) << '\n';
        emit(out.str(), to_json(lift));
        return kExitOk;
      };
    });
  }

  void add_levi_civita() {
    auto* sub = command("levi-civita", "Christoffel symbols of the Levi-Civita connection");
    sub->add_option("--metric", doc_b_, "Metric document")->required();
    sub->callback([this] {
      action_ = [this] {
        const Metric g = metric_from_json(load_json(doc_b_), chart());
        const Christoffel lc = levi_civita(g);
        emit(text(lc, "Gamma"), to_json(lc));
        return kExitOk;
      };
    });
  }

  void add_scalar_product() {
    auto* sub = command("scalar-product", "Canonical pairing of two densities over the torus");
    sub->add_option("a", doc_a_, "Density document")->required();
    sub->add_option("b", doc_b_, "Density document")->required();
    sub->callback([this] {
      action_ = [this] {
        const Density a = density_from_json(load_json(doc_a_), chart());
        const Density b = density_from_json(load_json(doc_b_), chart());
        const IntegralValue v = scalar_product(a, b, IntegrationDomain::torus(g_.dim));
        std::ostringstream out;
        out.precision(17);
        json j = {{"value", v.value}};
        if (v.exact()) {
          out << v.exact_factor->to_string() << " * (2pi)^" << g_.dim << " = ";
          j["exact_factor"] = v.exact_factor->to_string();
        }
        out << v.value << '\n';
        emit(out.str(), j);
        return kExitOk;
      };
    });
  }

  void add_divergence() {
    auto* sub = command("divergence", "div K = d_i K^i - K^0 for K = K^i d_i + K^0 w");
    sub->add_option("op", op_a_, "First-order operator")->required();
    sub->callback([this] {
      action_ = [this] {
        const Expr d = divergence_hat(load_operator(op_a_));
        emit(to_string(d) + "\n", {{"divergence", to_json(d)}});
        return kExitOk;
      };
    });
  }

  void add_verify() {
    auto* sub = app_.add_subcommand("verify", "Run randomized identity suites");
    sub->add_flag("--json", g_.json_out, "Print JSON reports");
    sub->add_option("-o,--output", g_.output, "Write the report to a file");
    sub->add_option("--suite", suite_, "Suite name or 'all'")->default_val("all");
    sub->add_option("--seed", seed_, "Seed (default 42, or DENSOPS_SEED)");
    sub->add_option("--trials", cfg_.trials, "Trials per suite")->check(CLI::PositiveNumber);
    sub->add_option("--max-order", cfg_.max_order, "Operator order bound")->check(CLI::Range(0, 6));
    sub->add_option("--degree", cfg_.degree, "Trig-polynomial degree bound")->check(CLI::Range(0, 8));
    sub->callback([this] {
      action_ = [this] {
        cfg_.seed = 42;
        if (const char* env = std::getenv("DENSOPS_SEED")) cfg_.seed = std::stoull(env);
        if (seed_) cfg_.seed = *seed_;
        const auto reports = run_suites(suite_, cfg_);
        bool ok = true;
        std::string t;
        json j = json::array();
        for (const auto& r : reports) {
          ok = ok && r.passed();
          t += to_text(r);
          j.push_back(to_json(r));
        }
        emit(t, reports.size() == 1 ? j[0] : j);
        return ok ? kExitOk : kExitFailed;
      };
    });
  }

  CLI::App app_;
  Globals g_;
  std::function<int()> action_;
  std::string op_a_, op_b_, doc_a_, doc_b_, weight_ = "0", lambda0_, coeff_, suite_ = "all";
  std::vector<std::string> list_a_, list_b_;
  std::optional<std::uint64_t> seed_;
  RandomSuiteConfig cfg_;
};

}  // namespace

int main(int argc, char** argv) {
  try {
    Cli cli;
    return cli.run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
