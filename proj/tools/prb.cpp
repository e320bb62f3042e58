// Command-line front end: parse JSON problem files, run the bound engine,
// and emit deterministic JSON (or text / LaTeX) on stdout.
//
// Exit codes: 0 success, 1 precondition or evaluation error, 2 parse error.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "prb/oracle.hpp"
#include "prb/problem.hpp"

using ojson = nlohmann::ordered_json;

namespace {

long g_precision = 128;
long g_refine = 0;
std::string g_format = "json";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Lossless upper dyadic rendering plus a decimal rendering rounded up.
ojson dyadic_upper(const prb::Rational& x) {
    return ojson{{"hex", prb::hexfloat_upper(x)}, {"decimal", prb::decimal_upper(x, 12)}};
}

std::string latex_rational(const prb::Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return "\\frac{" + x.get_num().get_str() + "}{" + x.get_den().get_str() + "}";
}

/// LaTeX form of the fully explicit bound formula.
std::string latex_formula(const prb::SymbolicBound& sb) {
    std::ostringstream os;
    os << prb::decimal_upper(sb.a_prime, 2);
    if (sb.p != 0) os << " \\, n!^{" << sb.p << "/" << sb.q << "}";
    prb::AlgebraicModulus da(sb.alpha_poly);
    bool exact_alpha = false;
    if (da.exact_square()) {
        prb::Rational sq = da.exact_sq();
        if (mpz_perfect_square_p(sq.get_num_mpz_t()) && mpz_perfect_square_p(sq.get_den_mpz_t())) {
            mpz_class sn, sd;
            mpz_sqrt(sn.get_mpz_t(), sq.get_num_mpz_t());
            mpz_sqrt(sd.get_mpz_t(), sq.get_den_mpz_t());
            prb::Rational delta(sn, sd);
            delta.canonicalize();
            prb::Rational alpha = 1 / delta;
            os << " \\left(" << latex_rational(alpha) << "\\right)^{n}";
            exact_alpha = true;
        }
    }
    if (!exact_alpha)
        os << " \\left(" << prb::decimal_upper(prb::detail::alpha_enclosure(sb.alpha_poly, 128).hi, 2) << "\\right)^{n}";
    if (sb.p > 0) os << " (2\\pi)^{" << sb.p << "/" << sb.q << "} \\left(\\tfrac{n}{" << sb.q << "}+1\\right)^{" << sb.p << "}";
    if (sb.p < 0) os << " (n+1)^{" << -sb.p << "/" << sb.q << "}";
    if (sb.T == 0) {
        os << " \\left(\\frac{n+" << sb.K + 1 << "}{" << sb.K << "}\\right)^{" << sb.K << "}"
           << " \\left(1-\\frac{" << sb.K << "}{n+" << sb.K + 1 << "}\\right)^{-n}";
    } else {
        os << " \\exp\\!\\left(\\frac{" << sb.K << "}{" << sb.T << "}\\left(\\frac{n+" << sb.K + 1 << "}{" << sb.K
           << "}\\right)^{" << sb.T << "/" << sb.T + 1 << "}\\right)"
           << " \\left(1-\\left(\\frac{" << sb.K << "}{n+" << sb.K + 1 << "}\\right)^{1/" << sb.T + 1
           << "}\\right)^{-n}";
    }
    if (!sb.valuation_prefix.empty())
        os << " \\quad (n \\mapsto n-" << sb.valuation_prefix.size() << ",\\ n \\ge " << sb.valuation_prefix.size() << ")";
    return os.str();
}

void print_text(const ojson& j, std::ostream& out, const std::string& prefix = "") {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            print_text(value, out, prefix + key + ".");
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            long i = 0;
            for (const auto& item : value) print_text(item, out, prefix + key + "[" + std::to_string(i++) + "].");
        } else {
            out << prefix << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
    }
}

void emit(const ojson& j) {
    if (g_format == "json") {
        std::cout << j.dump(2) << "\n";
    } else if (g_format == "latex") {
        if (j.contains("formula_latex"))
            std::cout << j["formula_latex"].get<std::string>() << "\n";
        else
            print_text(j, std::cout);
    } else {
        print_text(j, std::cout);
    }
}

prb::BoundParams bound_from_spec(const prb::ProblemSpec& spec) {
    if (spec.initial_are_bounds) {
        std::vector<prb::Rational> moduli;
        for (const auto& g : spec.initial) moduli.push_back(g.re);
        return prb::bound_rec(spec.rec, moduli);
    }
    return prb::bound_rec(spec.rec, spec.initial);
}

prb::Rational required(const std::optional<prb::Rational>& from_file, const std::string& flag,
                       const std::string& what) {
    if (!flag.empty()) return prb::parse_rational_literal(flag);
    if (from_file) return *from_file;
    throw std::invalid_argument("missing " + what + ": pass the flag or set it in the problem file");
}

const char* regime_name(prb::TailRegime r) {
    switch (r) {
        case prb::TailRegime::CLOSED_FORM: return "closed-form";
        case prb::TailRegime::SMALL_N: return "small-n";
        default: return "large-n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified bounds for sequences defined by linear recurrences with polynomial coefficients"};
    app.require_subcommand(1);
    app.add_option("--precision", g_precision, "working precision in bits")->capture_default_str();
    app.add_option("--refine", g_refine, "extra refinement steps")->capture_default_str();
    app.add_option("--format", g_format, "output format")
        ->check(CLI::IsMember({"json", "text", "latex"}))
        ->capture_default_str();

    std::string input, num_expr, den_expr = "1", palpha_expr, point_flag, eps_flag;
    long from_n = 0, order_j = -1, upto = 200, m_exp = 1;

    std::function<ojson()> action;

    auto add_subcommand = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();  // global flags may follow the subcommand
        return sub;
    };

    auto* c_bound = add_subcommand("bound-rec", "certified bound parameters for a recurrence");
    c_bound->add_option("-i,--input", input, "problem file")->required();
    c_bound->callback([&] {
        action = [&]() -> ojson {
            prb::ProblemSpec spec = prb::parse_problem(read_file(input));
            prb::BoundParams b = bound_from_spec(spec);
            prb::SymbolicBound sb = prb::symbolic_bound(b);
            ojson out;
            out["kappa"] = ojson{{"p", b.p}, {"q", b.q}};
            out["p_alpha"] = b.p_alpha.to_string("z");
            out["alpha_upper"] = dyadic_upper(prb::detail::alpha_enclosure(b.p_alpha, g_precision).hi);
            out["T"] = b.T;
            out["K"] = b.K;
            out["A"] = b.A.get_str();
            ojson prefix = ojson::array();
            for (const auto& v : b.valuation_prefix) prefix.push_back(v.get_str());
            out["valuation_prefix"] = prefix;
            out["formula"] = sb.text;
            out["formula_latex"] = latex_formula(sb);
            return out;
        };
    });

    auto* c_rat = add_subcommand("bound-ratfun", "majorant constant for a rational function");
    c_rat->add_option("--num", num_expr, "numerator polynomial in z")->required();
    c_rat->add_option("--den", den_expr, "denominator polynomial in z")->capture_default_str();
    c_rat->add_option("--palpha", palpha_expr, "scale polynomial in z")->required();
    c_rat->add_option("-m", m_exp, "majorant exponent")->capture_default_str();
    c_rat->callback([&] {
        action = [&]() -> ojson {
            prb::RatFun r(prb::parse_coefficient(num_expr, 'z'), prb::parse_coefficient(den_expr, 'z'));
            prb::Poly pa = prb::parse_coefficient(palpha_expr, 'z');
            prb::RatMajorant st = prb::bound_ratpoly(r, pa, static_cast<int>(m_exp));
            for (long i = 0; i < g_refine; ++i) st = prb::refine(st, r);
            ojson out;
            out["M"] = st.M.get_str();
            out["m"] = st.m;
            out["p_alpha"] = st.alpha_poly.to_string("z");
            out["delta_alpha_lower"] = dyadic_upper(st.delta_alpha.lo);
            out["n0"] = st.n0;
            out["prefix_max"] = st.h_n0.get_str();
            out["tail_estimate"] = st.t_n0.get_str();
            return out;
        };
    });

    auto* c_tail = add_subcommand("tail", "certified tail bound of the generating series");
    c_tail->add_option("-i,--input", input, "problem file")->required();
    c_tail->add_option("--point", point_flag, "evaluation point modulus |z|");
    c_tail->add_option("--from", from_n, "first index of the tail")->capture_default_str();
    c_tail->add_option("--order", order_j, "derivative order");
    c_tail->callback([&] {
        action = [&]() -> ojson {
            prb::ProblemSpec spec = prb::parse_problem(read_file(input));
            prb::BoundParams b = bound_from_spec(spec);
            prb::Rational x = required(spec.point, point_flag, "--point");
            long j = (order_j >= 0) ? order_j : spec.derivative;
            prb::TailEvaluation te = prb::tail_bound(prb::TailQuery{b, x, j, from_n}, g_precision);
            ojson out;
            out["point"] = x.get_str();
            out["from"] = from_n;
            out["order"] = j;
            out["regime"] = regime_name(te.regime);
            out["bound"] = dyadic_upper(te.bound);
            return out;
        };
    });

    auto* c_trunc = add_subcommand("truncation-order", "first index with a tail below eps");
    c_trunc->add_option("-i,--input", input, "problem file")->required();
    c_trunc->add_option("--point", point_flag, "evaluation point modulus |z|");
    c_trunc->add_option("--eps", eps_flag, "target accuracy (e.g. 1e-100)");
    c_trunc->callback([&] {
        action = [&]() -> ojson {
            prb::ProblemSpec spec = prb::parse_problem(read_file(input));
            prb::BoundParams b = bound_from_spec(spec);
            prb::Rational x = required(spec.point, point_flag, "--point");
            prb::Rational eps = required(spec.eps, eps_flag, "--eps");
            long n = prb::truncation_order(b, x, eps, spec.derivative, g_precision);
            return ojson{{"point", x.get_str()}, {"N", n}};
        };
    });

    auto* c_check = add_subcommand("check", "compare the certificate against exact unrolled values");
    c_check->add_option("-i,--input", input, "problem file")->required();
    c_check->add_option("--upto", upto, "number of indices to check")->capture_default_str();
    c_check->callback([&] {
        action = [&]() -> ojson {
            prb::ProblemSpec spec = prb::parse_problem(read_file(input));
            prb::BoundParams b = bound_from_spec(spec);
            prb::OracleReport rep;
            if (spec.initial_are_bounds) {
                std::vector<prb::Rational> moduli;
                for (const auto& g : spec.initial) moduli.push_back(g.re);
                rep = prb::check_certificate_moduli(spec.rec, moduli, b, upto, std::max<long>(g_precision, 256));
            } else {
                rep = prb::check_certificate(spec.rec, spec.initial, b, upto, std::max<long>(g_precision, 256));
            }
            ojson viol = ojson::array();
            for (const auto& v : rep.violations)
                viol.push_back(ojson{{"n", v.n}, {"claimed", v.claimed.get_str()}, {"exact_low", v.exact_low.get_str()}});
            return ojson{{"checked_upto", rep.checked_upto}, {"violations", viol}};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (const char* env = std::getenv("PRB_PRECISION")) {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (end && *end == '\0' && bits >= 2) g_precision = bits;
    }

    try {
        emit(action());
        return 0;
    } catch (const prb::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cout << ojson{{"error", e.what()}}.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        std::cout << ojson{{"error", e.what()}}.dump(2) << "\n";
        return 1;
    }
}
