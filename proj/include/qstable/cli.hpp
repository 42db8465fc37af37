#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "io.hpp"
#include "oracle/oracle.hpp"
#include "qstable.hpp"

namespace qstable::cli {

enum class Format { json, latex, text };

enum ExitCode : int { ok = 0, invalid_input = 1, invariant_violation = 2, mismatch = 3 };

struct RunConfig {
    std::string quiver_file;
    std::optional<std::vector<long>> theta;  // falls back to the file, then to zero
    BigRational slope = 0;
    long max_height = 4;
    std::vector<long> primes{2, 3};
    long q1_order = 2;
    Format format = Format::json;
    std::uint64_t budget = std::uint64_t{1} << 24;
    unsigned threads = 1;
    bool corrupt_table = false;  // verify self-test: perturbs one a_alpha
};

/// stdout and stderr of one command. Nothing reaches stdout unless the
/// config validated.
struct Outcome {
    int code = ok;
    std::string out;
    std::string err;
};

inline std::vector<long> parse_csv(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(item, &used);
        } catch (const std::exception&) {
            throw io::ParseError("not an integer list: \"" + s + "\"");
        }
        if (used != item.size()) throw io::ParseError("not an integer list: \"" + s + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw io::ParseError("empty integer list");
    return out;
}

inline Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "latex") return Format::latex;
    if (s == "text") return Format::text;
    throw io::ParseError("unknown format \"" + s + "\"");
}

/// A validated config: quiver loaded, theta resolved, context built.
struct Prepared {
    RunConfig config;
    Quiver quiver;
    CountingContext ctx;
};

inline Prepared prepare(const RunConfig& c) {
    if (c.max_height < 1) throw io::ParseError("--max-height must be >= 1");
    if (c.q1_order < 0) throw io::ParseError("--q1-order must be >= 0");
    if (c.primes.empty()) throw io::ParseError("--primes must name at least one prime");
    for (long p : c.primes)
        if (!is_prime(p) || p > 251) throw io::ParseError(std::to_string(p) + " is not a supported prime (2..251)");
    if (c.budget == 0) throw io::ParseError("--budget must be positive");
    if (c.quiver_file.empty()) throw io::ParseError("--quiver is required");
    io::QuiverFile file = io::load_quiver(c.quiver_file);
    std::vector<long> theta(file.quiver.size(), 0);
    if (c.theta)
        theta = *c.theta;
    else if (file.theta)
        theta = *file.theta;
    if (theta.size() != file.quiver.size())
        throw io::ParseError("theta has " + std::to_string(theta.size()) + " entries but the quiver has " +
                             std::to_string(file.quiver.size()) + " vertices");
    CountingContext ctx = CountingContext::make(file.quiver, Stability{theta}, c.slope, c.max_height);
    return Prepared{c, std::move(file.quiver), std::move(ctx)};
}

/// Runs body with the exit-code policy: bad input 1, broken invariant 2.
inline Outcome guarded(const RunConfig& c, const std::function<Outcome(const Prepared&)>& body) {
    try {
        const Prepared prep = prepare(c);
        return body(prep);
    } catch (const PreconditionError& e) {
        return {invalid_input, "", std::string("error: ") + e.what() + "\n"};
    } catch (const BudgetExceeded& e) {
        return {invalid_input, "", std::string("error: ") + e.what() + "\n"};
    } catch (const InvariantViolation& e) {
        return {invariant_violation, "", std::string("invariant violated: ") + e.what() + "\n"};
    } catch (const Error& e) {
        return {invariant_violation, "", std::string("error: ") + e.what() + "\n"};
    }
}

namespace detail {

inline io::json header(const Prepared& p, const std::string& command) {
    return {{"command", command},
            {"quiver", io::to_json(p.quiver)},
            {"theta", p.ctx.theta.theta},
            {"slope", p.ctx.mu.get_str()},
            {"max_height", p.ctx.trunc.max_height}};
}

inline std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

inline std::string latex_vec(const DimVector& a) {
    std::string s = a.to_string();
    return s.size() == 3 ? s.substr(1, 1) : s;
}

/// One-vertex series read as power series in t; otherwise a list of x^alpha terms.
inline std::string series_text(const RatSeries& s) {
    if (s.truncation().num_vars == 1) return io::ascending(univariate_coefficients(s, s.truncation().max_height), "t");
    std::string out;
    for (const auto& [a, c] : s.terms()) {
        if (!out.empty()) out += " + ";
        out += "(" + c.get_str() + ")";
        if (!a.is_zero()) out += "*x^" + a.to_string();
    }
    return out.empty() ? "0" : out;
}

inline std::string latex_table_line(const std::string& name, const DimVector& a, const QPoly& p) {
    return name + "_{" + latex_vec(a) + "}(q) &= " + io::latex_poly(p.coefficients(), "q") + " = " +
           io::latex_poly(in_qminus1_basis(p), "(q-1)") + " \\\\\n";
}

}  // namespace detail

/// a_alpha for every alpha of the cone, in both bases.
inline Outcome cmd_a_series(const RunConfig& c) {
    return guarded(c, [](const Prepared& p) {
        const auto table = a_series(p.ctx);
        Outcome o;
        if (p.config.format == Format::json) {
            io::json j = detail::header(p, "a-series");
            j["entries"] = io::to_json(table);
            o.out = detail::dump(j);
        } else if (p.config.format == Format::latex) {
            o.out = "\\begin{align*}\n";
            for (const auto& [a, poly] : table.entries) o.out += detail::latex_table_line("a", a, poly);
            o.out += "\\end{align*}\n";
        } else {
            for (const auto& [a, poly] : table.entries)
                o.out += "a_" + a.to_string() + " = " + poly.to_string() + "  |  (q-1)-basis: " +
                         io::ascending(in_qminus1_basis(poly), "(q-1)") + "\n";
        }
        return o;
    });
}

inline Outcome cmd_r_series(const RunConfig& c) {
    return guarded(c, [](const Prepared& p) {
        const auto table = r_table(p.ctx);
        Outcome o;
        if (p.config.format == Format::json) {
            io::json rows = io::json::array();
            for (const auto& [a, f] : table.entries) rows.push_back({{"alpha", io::to_json(a)}, {"r", io::to_json(f)}});
            io::json j = detail::header(p, "r-series");
            j["entries"] = rows;
            o.out = detail::dump(j);
        } else if (p.config.format == Format::latex) {
            o.out = "\\begin{align*}\n";
            for (const auto& [a, f] : table.entries)
                o.out += "r_{" + detail::latex_vec(a) + "}(q) &= " + io::latex(f) + " \\\\\n";
            o.out += "\\end{align*}\n";
        } else {
            for (const auto& [a, f] : table.entries) o.out += "r_" + a.to_string() + " = " + f.to_string() + "\n";
        }
        return o;
    });
}

/// s_{r alpha, r} for every r alpha of height within the truncation.
inline Outcome cmd_s_count(const RunConfig& c) {
    return guarded(c, [](const Prepared& p) {
        const auto table = a_series(p.ctx);
        struct Row {
            DimVector beta, base;
            long r;
            QPoly s;
        };
        std::vector<Row> rows;
        for (const auto& [a, poly] : table.entries)
            for (long r = 1; a.height() * r <= p.ctx.trunc.max_height; ++r)
                rows.push_back({a.scaled(r), a, r, s_alpha_r(table, a, r)});
        Outcome o;
        if (p.config.format == Format::json) {
            io::json arr = io::json::array();
            for (const auto& row : rows)
                arr.push_back({{"alpha", io::to_json(row.beta)},
                               {"r", row.r},
                               {"base", io::to_json(row.base)},
                               {"poly_q", io::to_json(row.s)},
                               {"poly_qminus1", io::to_json(in_qminus1_basis(row.s))}});
            io::json j = detail::header(p, "s-count");
            j["entries"] = arr;
            o.out = detail::dump(j);
        } else if (p.config.format == Format::latex) {
            o.out = "\\begin{align*}\n";
            for (const auto& row : rows)
                o.out += "s_{" + detail::latex_vec(row.beta) + "," + std::to_string(row.r) +
                         "}(q) &= " + io::latex_poly(row.s.coefficients(), "q") + " = " +
                         io::latex_poly(in_qminus1_basis(row.s), "(q-1)") + " \\\\\n";
            o.out += "\\end{align*}\n";
        } else {
            for (const auto& row : rows)
                o.out += "s_{" + row.beta.to_string() + "," + std::to_string(row.r) + "} = " + row.s.to_string() + "\n";
        }
        return o;
    });
}

/// f_0..f_order, positivity, necklaces, and for loop quivers the f_1 and degree reports.
inline Outcome cmd_expand(const RunConfig& c) {
    return guarded(c, [](const Prepared& p) {
        const auto table = a_series(p.ctx);
        const auto fs = q1_expansion(p.ctx, table, static_cast<std::size_t>(p.config.q1_order));
        const auto positivity = positivity_report(p.quiver, table);
        const auto m = loop_count(p.quiver);
        std::optional<F1Comparison> f1;
        std::vector<DegreeObservation> degrees;
        if (m) {
            if (fs.size() > 1) f1 = compare_f1(*m, fs);
            degrees = observe_degrees(*m, fs);
        }
        Outcome o;
        if (p.config.format == Format::json) {
            io::json j = detail::header(p, "f-expand");
            io::json f = io::json::array();
            for (std::size_t n = 0; n < fs.size(); ++n) f.push_back({{"n", n}, {"series", io::to_json(fs[n])}});
            j["f"] = f;
            io::json pos = io::json::array();
            for (const auto& r : positivity) {
                io::json row{{"alpha", io::to_json(r.alpha)},
                             {"poly_q", io::to_json(r.poly_q)},
                             {"poly_qminus1", io::to_json(r.poly_qminus1)},
                             {"nonnegative_in_qminus1", r.nonnegative}};
                if (r.necklace) {
                    row["necklace"] = r.necklace->get_str();
                    row["linear_term"] = r.linear_term.get_str();
                    row["necklace_match"] = r.linear_term == BigRational(*r.necklace);
                }
                pos.push_back(row);
            }
            j["positivity"] = pos;
            if (f1)
                j["f1_conjecture"] = {{"m", f1->m},
                                      {"observed", io::to_json(f1->observed)},
                                      {"conjectured", io::to_json(f1->conjectured)},
                                      {"match", f1->match}};
            if (m) {
                io::json deg = io::json::array();
                for (const auto& d : degrees)
                    deg.push_back({{"n", d.n},
                                   {"exponent", d.exponent},
                                   {"observed_degree", d.observed_degree},
                                   {"truncation", d.truncation}});
                j["degrees"] = deg;
            }
            o.out = detail::dump(j);
        } else if (p.config.format == Format::latex) {
            o.out = "\\begin{align*}\n";
            for (std::size_t n = 0; n < fs.size(); ++n) {
                std::string body;
                if (fs[n].truncation().num_vars == 1)
                    body = io::latex_poly(univariate_coefficients(fs[n], fs[n].truncation().max_height), "t");
                else
                    body = detail::series_text(fs[n]);
                o.out += "f_{" + std::to_string(n) + "} &= " + body + " + O(\\text{height} > " +
                         std::to_string(p.ctx.trunc.max_height) + ") \\\\\n";
            }
            for (const auto& r : positivity) o.out += detail::latex_table_line("a", r.alpha, r.poly_q);
            o.out += "\\end{align*}\n";
        } else {
            for (std::size_t n = 0; n < fs.size(); ++n)
                o.out += "f_" + std::to_string(n) + " = " + detail::series_text(fs[n]) + "\n";
            o.out += "positivity in the (q-1)-basis (observation):\n";
            for (const auto& r : positivity) {
                o.out += "  a_" + r.alpha.to_string() + " = " + io::ascending(r.poly_qminus1, "(q-1)") +
                         (r.nonnegative ? "  [nonnegative]" : "  [has negative coefficients]");
                if (r.necklace)
                    o.out += "  linear " + r.linear_term.get_str() + " vs necklaces " + r.necklace->get_str() +
                             (r.linear_term == BigRational(*r.necklace) ? " (match)" : " (MISMATCH)");
                o.out += "\n";
            }
            if (f1)
                o.out += "f_1 vs C(m,2) t(t-1)/(1-mt)^2 to t^" + std::to_string(p.ctx.trunc.max_height) + ": " +
                         (f1->match ? "match" : "differs") + "\n";
            for (const auto& d : degrees)
                o.out += "deg_t f_" + std::to_string(d.n) + "*(1-" + std::to_string(*m) + "t)^" +
                         std::to_string(d.exponent) + " = " + std::to_string(d.observed_degree) +
                         " (truncation " + std::to_string(d.truncation) + ")\n";
        }
        return o;
    });
}

/// Loop quivers: (q-1)-linear term of a_d against primitive necklaces, and
/// (a - x)/(1 - q) at q = 1 against Log(1 - m x). Exit 3 on any difference.
inline Outcome cmd_necklaces(const RunConfig& c) {
    return guarded(c, [](const Prepared& p) {
        const auto m = loop_count(p.quiver);
        if (!m) throw PreconditionError("necklaces needs a one-vertex quiver with at least one loop");
        const auto table = a_series(p.ctx);
        const auto rows = positivity_report(p.quiver, table);
        const auto lhs = linear_part_at_one(table, p.ctx.trunc);
        const auto rhs = log_one_minus_mx(*m, p.ctx.trunc);
        bool all = lhs == rhs;
        io::json arr = io::json::array();
        std::string text;
        for (const auto& r : rows) {
            const long d = r.alpha[0];
            const BigRational expect_linear(*r.necklace);
            const BigRational expect_constant = d == 1 ? BigRational(1) : BigRational(0);
            const bool match = r.linear_term == expect_linear && r.constant_term == expect_constant;
            all = all && match;
            arr.push_back({{"d", d},
                           {"constant_term", r.constant_term.get_str()},
                           {"linear_term", r.linear_term.get_str()},
                           {"necklaces", r.necklace->get_str()},
                           {"match", match}});
            text += "d=" + std::to_string(d) + "  constant " + r.constant_term.get_str() + "  linear " +
                    r.linear_term.get_str() + "  necklaces " + r.necklace->get_str() + (match ? "  ok" : "  MISMATCH") +
                    "\n";
        }
        Outcome o;
        if (p.config.format == Format::json) {
            io::json j = detail::header(p, "necklaces");
            j["m"] = *m;
            j["rows"] = arr;
            j["log_identity"] = lhs == rhs;
            j["all_match"] = all;
            o.out = detail::dump(j);
        } else {
            o.out = text + "(a - x)/(1 - q) at q=1 equals Log(1 - " + std::to_string(*m) + "x): " +
                    (lhs == rhs ? "yes" : "NO") + "\n";
        }
        if (!all) {
            o.code = mismatch;
            o.err = "necklace comparison failed\n";
        }
        return o;
    });
}

struct VerifyRow {
    DimVector alpha;
    long p = 0;
    std::string quantity;
    BigRational formula, oracle;
    bool match = false;
};

struct VerifySkip {
    DimVector alpha;
    long p = 0;
    std::string reason;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    std::vector<VerifySkip> skipped;
    bool all_match() const {
        for (const auto& r : rows)
            if (!r.match) return false;
        return true;
    }
};

/// Oracle comparisons of t, r, a and s for every alpha of the cone at every
/// prime; alpha beyond the oracle budget is skipped and reported.
inline VerifyReport verify(const Prepared& prep) {
    const auto& ctx = prep.ctx;
    const auto r = r_table(ctx);
    auto a = a_series(ctx);
    if (prep.config.corrupt_table && !a.entries.empty()) a.entries.begin()->second += QPoly(1);
    oracle::OracleOptions opt;
    opt.budget = prep.config.budget;
    opt.threads = std::max(1u, prep.config.threads);
    VerifyReport rep;
    for (long p : prep.config.primes) {
        const auto fp = static_cast<oracle::Fp>(p);
        for (const auto& alpha : support(ctx.trunc)) {
            if (alpha.is_zero()) continue;
            oracle::OracleTally tal;
            try {
                tal = oracle::tally(ctx.quiver, alpha, ctx.theta, fp, opt);
            } catch (const BudgetExceeded& e) {
                rep.skipped.push_back({alpha, p, e.what()});
                continue;
            }
            auto add = [&](const std::string& what, const BigRational& f, const BigRational& o) {
                rep.rows.push_back({alpha, p, what, f, o, f == o});
            };
            add("t", t_alpha(ctx, alpha).evaluate(p), oracle::count_point_ratio(tal, alpha, fp));
            add("r", r.at(alpha).evaluate(p), oracle::count_semistable_ratio(tal, alpha, fp));
            add("a", a.at(alpha).evaluate(p), BigRational(oracle::count_abs_stable_classes(tal, alpha, fp)));
            for (long k = 2; k <= alpha.height(); ++k) {
                const auto base = alpha.divided(k);
                const BigRational formula = base ? s_alpha_r(a, *base, k).evaluate(p) : BigRational(0);
                add("s" + std::to_string(k), formula, BigRational(oracle::count_stable_with_r(tal, alpha, fp, k)));
            }
        }
    }
    return rep;
}

inline Outcome cmd_verify(const RunConfig& c) {
    return guarded(c, [](const Prepared& p) {
        const VerifyReport rep = verify(p);
        Outcome o;
        if (p.config.format == Format::json) {
            io::json rows = io::json::array();
            for (const auto& r : rep.rows)
                rows.push_back({{"alpha", io::to_json(r.alpha)},
                                {"p", r.p},
                                {"quantity", r.quantity},
                                {"formula", r.formula.get_str()},
                                {"oracle", r.oracle.get_str()},
                                {"match", r.match}});
            io::json skipped = io::json::array();
            for (const auto& s : rep.skipped)
                skipped.push_back({{"alpha", io::to_json(s.alpha)}, {"p", s.p}, {"reason", s.reason}});
            io::json j = detail::header(p, "verify");
            j["primes"] = p.config.primes;
            j["rows"] = rows;
            j["skipped"] = skipped;
            j["all_match"] = rep.all_match();
            o.out = detail::dump(j);
        } else {
            for (const auto& r : rep.rows)
                o.out += r.alpha.to_string() + " p=" + std::to_string(r.p) + " " + r.quantity + ": formula " +
                         r.formula.get_str() + ", oracle " + r.oracle.get_str() + (r.match ? "  ok" : "  MISMATCH") +
                         "\n";
            for (const auto& s : rep.skipped)
                o.out += s.alpha.to_string() + " p=" + std::to_string(s.p) + " skipped: " + s.reason + "\n";
            o.out += std::to_string(rep.rows.size()) + " comparisons, " + std::to_string(rep.skipped.size()) +
                     " skipped, " + (rep.all_match() ? "all match" : "MISMATCH") + "\n";
        }
        if (!rep.all_match()) {
            o.code = mismatch;
            for (const auto& r : rep.rows)
                if (!r.match)
                    o.err += "mismatch: " + r.quantity + " at " + r.alpha.to_string() + ", p=" + std::to_string(r.p) +
                             ": formula " + r.formula.get_str() + " vs oracle " + r.oracle.get_str() + "\n";
        }
        return o;
    });
}

/// Dispatch by subcommand name; "expand" is an alias of "f-expand".
inline Outcome run(const std::string& command, const RunConfig& c) {
    if (command == "a-series") return cmd_a_series(c);
    if (command == "r-series") return cmd_r_series(c);
    if (command == "s-count") return cmd_s_count(c);
    if (command == "f-expand" || command == "expand") return cmd_expand(c);
    if (command == "verify") return cmd_verify(c);
    if (command == "necklaces") return cmd_necklaces(c);
    return {invalid_input, "", "error: unknown command \"" + command + "\"\n"};
}

}  // namespace qstable::cli
