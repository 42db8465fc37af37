#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "../dim_vector.hpp"
#include "../errors.hpp"
#include "../quiver.hpp"
#include "fp.hpp"

namespace qstable::oracle {

/// One point of R_alpha(F_p): a matrix per arrow, in Quiver::arrow_list() order.
/// Arrow i -> j carries an alpha^j x alpha^i matrix.
struct RepPoint {
    DimVector alpha;
    std::vector<FpMatrix> mats;
};

struct OracleOptions {
    std::uint64_t budget = std::uint64_t{1} << 24;         // points visited
    std::uint64_t subspace_budget = std::uint64_t{1} << 20;  // subspace tuples per point
    bool slicing = true;
    unsigned threads = 1;
};

/// Point counts of one (quiver, alpha, theta, p) run; stable points are split by dim End.
struct OracleTally {
    mpz_class points = 0;
    mpz_class semistable = 0;
    std::map<long, mpz_class> stable_by_end_dim;

    OracleTally& operator+=(const OracleTally& o) {
        points += o.points;
        semistable += o.semistable;
        for (const auto& [r, c] : o.stable_by_end_dim) stable_by_end_dim[r] += c;
        return *this;
    }
};

inline mpz_class gl_alpha_order(const DimVector& alpha, Fp p) {
    mpz_class r = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) r *= gl_order_at(static_cast<std::size_t>(alpha[i]), p);
    return r;
}

/// R_alpha(F_p) together with the subspace data needed for stability tests.
class RepresentationSpace {
public:
    struct Arrow {
        std::size_t source, target, rows, cols;
    };
    struct Tuple {
        std::vector<std::uint32_t> sub;  // subspace index per vertex
        long theta = 0;
        long height = 0;
    };

    RepresentationSpace(const Quiver& q, DimVector alpha, Fp p, const OracleOptions& opt = {})
        : quiver_(q), alpha_(std::move(alpha)), field_(p), opt_(opt) {
        if (alpha_.size() != q.size()) throw PreconditionError("oracle: dimension vector length mismatch");
        for (const auto& [i, j] : q.arrow_list()) {
            arrows_.push_back({i, j, static_cast<std::size_t>(alpha_[j]), static_cast<std::size_t>(alpha_[i])});
            dim_ += arrows_.back().rows * arrows_.back().cols;
        }
        std::size_t off = 0;
        for (std::size_t v = 0; v < q.size(); ++v) {
            offsets_.push_back(off);
            off += static_cast<std::size_t>(alpha_[v] * alpha_[v]);
        }
        unknowns_ = off;
    }

    const Quiver& quiver() const { return quiver_; }
    const DimVector& alpha() const { return alpha_; }
    const PrimeField& field() const { return field_; }
    const OracleOptions& options() const { return opt_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    std::size_t dimension() const { return dim_; }
    std::size_t offset(std::size_t v) const { return offsets_[v]; }
    std::size_t endo_unknowns() const { return unknowns_; }

    /// p^dim R_alpha, or an error if it exceeds the budget.
    std::uint64_t checked_count(std::size_t dim) const {
        std::uint64_t n = 1;
        for (std::size_t i = 0; i < dim; ++i) {
            if (n > opt_.budget / field_.p())
                throw BudgetExceeded("oracle: p^" + std::to_string(dim) + " points exceed the budget of " +
                                     std::to_string(opt_.budget) + "; use a smaller alpha or p");
            n *= field_.p();
        }
        return n;
    }

    FpMatrix matrix_from_code(std::size_t arrow, std::uint64_t code) const {
        const auto& a = arrows_[arrow];
        FpMatrix m(a.rows, a.cols);
        for (std::size_t k = 0; k < m.a.size(); ++k, code /= field_.p()) m.a[k] = static_cast<Fp>(code % field_.p());
        return m;
    }
    std::uint64_t code_of(const FpMatrix& m) const {
        std::uint64_t c = 0;
        for (std::size_t k = m.a.size(); k-- > 0;) c = c * field_.p() + m.a[k];
        return c;
    }

    const std::vector<Subspace>& subspaces(std::size_t v) const {
        ensure_subspaces();
        return subspaces_[v];
    }

    /// Nonzero proper subspace tuples, generated lazily.
    const std::vector<Tuple>& tuples(const Stability& theta) const {
        ensure_subspaces();
        if (tuples_ && tuple_theta_ == theta.theta) return *tuples_;
        std::uint64_t count = 1;
        for (std::size_t v = 0; v < quiver_.size(); ++v) {
            count *= subspaces_[v].size();
            if (count > opt_.subspace_budget)
                throw BudgetExceeded("oracle: too many subspace tuples for " + alpha_.to_string());
        }
        std::vector<Tuple> out;
        std::vector<std::uint32_t> cur(quiver_.size(), 0);
        auto rec = [&](auto&& self, std::size_t v) -> void {
            if (v == quiver_.size()) {
                Tuple t{cur, 0, 0};
                for (std::size_t w = 0; w < cur.size(); ++w) {
                    const long d = static_cast<long>(subspaces_[w][cur[w]].dim);
                    t.theta += theta.theta[w] * d;
                    t.height += d;
                }
                if (t.height != 0 && t.height != alpha_.height()) out.push_back(std::move(t));
                return;
            }
            for (std::uint32_t s = 0; s < subspaces_[v].size(); ++s) {
                cur[v] = s;
                self(self, v + 1);
            }
        };
        rec(rec, 0);
        tuples_ = std::move(out);
        tuple_theta_ = theta.theta;
        return *tuples_;
    }

    /// Image of the vector with the given code under m, as a code.
    std::uint64_t apply(const FpMatrix& m, std::uint64_t code) const {
        const Fp p = field_.p();
        const auto v = decode(code, m.cols, p);
        std::uint64_t out = 0;
        for (std::size_t r = m.rows; r-- > 0;) {
            Fp s = 0;
            for (std::size_t c = 0; c < m.cols; ++c) s += m(r, c) * v[c];
            out = out * p + s % p;
        }
        return out;
    }

    /// Whether m maps subspace u (at the source) into w (at the target).
    bool maps_into(const FpMatrix& m, const Subspace& u, const Subspace& w) const {
        for (auto b : u.basis_codes)
            if (!w.member[apply(m, b)]) return false;
        return true;
    }

    /// Rows of the linear map phi -> (phi_j X - X phi_i) for one arrow.
    void append_equations(std::size_t arrow, const FpMatrix& x, FpMatrix& eq, std::size_t row0) const {
        const auto& a = arrows_[arrow];
        const PrimeField& f = field_;
        for (std::size_t r = 0; r < a.rows; ++r)
            for (std::size_t c = 0; c < a.cols; ++c) {
                const std::size_t row = row0 + r * a.cols + c;
                // (phi_j X)(r,c) = sum_k phi_j(r,k) X(k,c)
                for (std::size_t k = 0; k < a.rows; ++k) {
                    const std::size_t u = offsets_[a.target] + r * a.rows + k;
                    eq(row, u) = f.add(eq(row, u), x(k, c));
                }
                // (X phi_i)(r,c) = sum_k X(r,k) phi_i(k,c)
                for (std::size_t k = 0; k < a.cols; ++k) {
                    const std::size_t u = offsets_[a.source] + k * a.cols + c;
                    eq(row, u) = f.sub(eq(row, u), x(r, k));
                }
            }
    }

private:
    void ensure_subspaces() const {
        if (!subspaces_.empty()) return;
        for (std::size_t v = 0; v < quiver_.size(); ++v) {
            checked_count(static_cast<std::size_t>(alpha_[v]));
            subspaces_.push_back(all_subspaces(field_, static_cast<std::size_t>(alpha_[v])));
        }
    }

    Quiver quiver_;
    DimVector alpha_;
    PrimeField field_;
    OracleOptions opt_;
    std::vector<Arrow> arrows_;
    std::size_t dim_ = 0;
    std::vector<std::size_t> offsets_;
    std::size_t unknowns_ = 0;
    mutable std::vector<std::vector<Subspace>> subspaces_;
    mutable std::optional<std::vector<Tuple>> tuples_;
    mutable std::vector<long> tuple_theta_;
};

/// Stability and endomorphism tests with some arrows held fixed. The tuple
/// lists keep only subrepresentation candidates that matter for the slope
/// test and are invariant under the fixed arrows.
class PointEvaluator {
public:
    struct Verdict {
        bool semistable = false;
        bool stable = false;
    };

    PointEvaluator(const RepresentationSpace& space, const Stability& theta,
                   std::vector<std::pair<std::size_t, FpMatrix>> fixed = {})
        : space_(space), fixed_(std::move(fixed)) {
        if (theta.theta.size() != space.quiver().size()) throw PreconditionError("oracle: theta length mismatch");
        const DimVector& alpha = space.alpha();
        const long ta = theta(alpha), ha = alpha.height();
        for (const auto& t : space.tuples(theta)) {
            const long lhs = t.theta * ha, rhs = ta * t.height;
            if (lhs < rhs || !invariant_under(t, fixed_)) continue;
            (lhs > rhs ? destabilising_ : equal_).push_back(&t);
        }
        // phi commuting with the fixed arrows
        const auto& arrows = space.arrows();
        std::size_t rows = 0;
        for (const auto& [h, m] : fixed_) rows += arrows[h].rows * arrows[h].cols;
        FpMatrix eq(std::max<std::size_t>(rows, 1), space.endo_unknowns());
        std::size_t r0 = 0;
        for (const auto& [h, m] : fixed_) {
            space.append_equations(h, m, eq, r0);
            r0 += arrows[h].rows * arrows[h].cols;
        }
        endo_basis_ = null_space(space.field(), eq);
        for (std::size_t h = 0; h < arrows.size(); ++h) {
            bool is_fixed = false;
            for (const auto& fx : fixed_) is_fixed = is_fixed || fx.first == h;
            if (!is_fixed) free_.push_back(h);
        }
    }

    const std::vector<std::size_t>& free_arrows() const { return free_; }
    std::size_t endo_basis_size() const { return endo_basis_.size(); }

    /// mats holds a matrix for every arrow; only the free ones are read.
    Verdict classify(const std::vector<FpMatrix>& mats) const {
        Verdict v{true, true};
        if (space_.alpha().is_zero()) return {true, false};
        for (const Tuple* t : destabilising_)
            if (invariant_free(*t, mats)) return {false, false};
        for (const Tuple* t : equal_)
            if (invariant_free(*t, mats)) {
                v.stable = false;
                break;
            }
        return v;
    }

    long end_dim(const std::vector<FpMatrix>& mats) const {
        const auto& arrows = space_.arrows();
        const PrimeField& f = space_.field();
        std::size_t rows = 0;
        for (auto h : free_) rows += arrows[h].rows * arrows[h].cols;
        if (rows == 0) return static_cast<long>(endo_basis_.size());
        FpMatrix full(rows, space_.endo_unknowns());
        std::size_t r0 = 0;
        for (auto h : free_) {
            space_.append_equations(h, mats[h], full, r0);
            r0 += arrows[h].rows * arrows[h].cols;
        }
        // restrict to the span of endo_basis_
        FpMatrix restricted(rows, endo_basis_.size());
        for (std::size_t k = 0; k < endo_basis_.size(); ++k)
            for (std::size_t r = 0; r < rows; ++r) {
                Fp s = 0;
                for (std::size_t u = 0; u < full.cols; ++u) s = f.add(s, f.mul(full(r, u), endo_basis_[k][u]));
                restricted(r, k) = s;
            }
        return static_cast<long>(endo_basis_.size() - rank(f, restricted));
    }

private:
    using Tuple = RepresentationSpace::Tuple;

    bool invariant_under(const Tuple& t, const std::vector<std::pair<std::size_t, FpMatrix>>& ms) const {
        for (const auto& [h, m] : ms) {
            const auto& a = space_.arrows()[h];
            if (!space_.maps_into(m, space_.subspaces(a.source)[t.sub[a.source]],
                                  space_.subspaces(a.target)[t.sub[a.target]]))
                return false;
        }
        return true;
    }
    bool invariant_free(const Tuple& t, const std::vector<FpMatrix>& mats) const {
        for (auto h : free_) {
            const auto& a = space_.arrows()[h];
            if (!space_.maps_into(mats[h], space_.subspaces(a.source)[t.sub[a.source]],
                                  space_.subspaces(a.target)[t.sub[a.target]]))
                return false;
        }
        return true;
    }

    const RepresentationSpace& space_;
    std::vector<std::pair<std::size_t, FpMatrix>> fixed_;
    std::vector<const Tuple*> destabilising_, equal_;
    std::vector<std::vector<Fp>> endo_basis_;
    std::vector<std::size_t> free_;
};

/// Calls visit on every point of R_alpha(F_p) in lexicographic order of the
/// flattened entries (arrow by arrow, row-major; last entry fastest).
inline void enumerate_points(const Quiver& q, const DimVector& alpha, Fp p,
                             const std::function<void(const RepPoint&)>& visit, const OracleOptions& opt = {}) {
    RepresentationSpace space(q, alpha, p, opt);
    const std::uint64_t n = space.checked_count(space.dimension());
    RepPoint pt{alpha, {}};
    for (std::size_t h = 0; h < space.arrows().size(); ++h)
        pt.mats.emplace_back(space.arrows()[h].rows, space.arrows()[h].cols);
    std::vector<Fp*> slots;
    for (auto& m : pt.mats)
        for (auto& x : m.a) slots.push_back(&x);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (i > 0) {
            for (std::size_t k = slots.size(); k-- > 0;) {
                if (++*slots[k] < p) break;
                *slots[k] = 0;
            }
        }
        visit(pt);
    }
}

inline std::vector<RepPoint> collect_points(const Quiver& q, const DimVector& alpha, Fp p, const OracleOptions& opt = {}) {
    std::vector<RepPoint> out;
    enumerate_points(q, alpha, p, [&](const RepPoint& x) { out.push_back(x); }, opt);
    return out;
}

namespace detail {
inline void check_point(const RepresentationSpace& space, const RepPoint& pt) {
    if (pt.mats.size() != space.arrows().size()) throw PreconditionError("oracle: point has wrong number of matrices");
    for (std::size_t h = 0; h < pt.mats.size(); ++h)
        if (pt.mats[h].rows != space.arrows()[h].rows || pt.mats[h].cols != space.arrows()[h].cols)
            throw PreconditionError("oracle: matrix shape does not match alpha");
}
}  // namespace detail

inline bool is_semistable(const Quiver& q, const RepPoint& pt, const Stability& theta, Fp p,
                          const OracleOptions& opt = {}) {
    RepresentationSpace space(q, pt.alpha, p, opt);
    detail::check_point(space, pt);
    return PointEvaluator(space, theta).classify(pt.mats).semistable;
}

inline bool is_stable(const Quiver& q, const RepPoint& pt, const Stability& theta, Fp p,
                      const OracleOptions& opt = {}) {
    RepresentationSpace space(q, pt.alpha, p, opt);
    detail::check_point(space, pt);
    return PointEvaluator(space, theta).classify(pt.mats).stable;
}

/// dim_{F_p} End(point).
inline long end_dim(const Quiver& q, const RepPoint& pt, Fp p) {
    RepresentationSpace space(q, pt.alpha, p);
    detail::check_point(space, pt);
    return PointEvaluator(space, Stability::zero(q.size())).end_dim(pt.mats);
}

/// Orbits of GL_{alpha^i} x GL_{alpha^j} on the matrices of one arrow i -> j
/// (conjugation when i = j). Each orbit is listed by its smallest code.
struct ArrowOrbits {
    std::vector<std::uint64_t> reps;
    std::vector<std::uint64_t> sizes;
};

inline ArrowOrbits arrow_orbits(const RepresentationSpace& space, std::size_t arrow) {
    const auto& a = space.arrows()[arrow];
    const PrimeField& f = space.field();
    const std::uint64_t n = space.checked_count(a.rows * a.cols);
    // generators: transvections and a primitive-root scaling of each coordinate
    auto generators = [&](std::size_t k) {
        std::vector<FpMatrix> g;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                if (i == j) continue;
                FpMatrix t = FpMatrix::identity(k);
                t(i, j) = 1;
                g.push_back(t);
            }
        if (f.primitive_root() != 1)
            for (std::size_t i = 0; i < k; ++i) {
                FpMatrix d = FpMatrix::identity(k);
                d(i, i) = f.primitive_root();
                g.push_back(d);
            }
        return g;
    };
    std::vector<std::function<FpMatrix(const FpMatrix&)>> moves;
    if (a.source == a.target) {
        for (const auto& g : generators(a.rows)) {
            const FpMatrix gi = inverse(f, g);
            moves.push_back([&f, g, gi](const FpMatrix& x) { return mul(f, mul(f, g, x), gi); });
        }
    } else {
        for (const auto& g : generators(a.rows)) moves.push_back([&f, g](const FpMatrix& x) { return mul(f, g, x); });
        for (const auto& g : generators(a.cols)) moves.push_back([&f, g](const FpMatrix& x) { return mul(f, x, g); });
    }
    ArrowOrbits out;
    std::vector<char> seen(n, 0);
    std::vector<std::uint64_t> queue;
    for (std::uint64_t c = 0; c < n; ++c) {
        if (seen[c]) continue;
        seen[c] = 1;
        queue.assign(1, c);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const FpMatrix x = space.matrix_from_code(arrow, queue[head]);
            for (const auto& mv : moves) {
                const std::uint64_t y = space.code_of(mv(x));
                if (!seen[y]) {
                    seen[y] = 1;
                    queue.push_back(y);
                }
            }
        }
        out.reps.push_back(c);
        out.sizes.push_back(queue.size());
    }
    return out;
}

namespace detail {

/// Tally over all assignments of the free arrows, each weighted by `weight`.
inline void tally_free(const RepresentationSpace& space, const PointEvaluator& ev, std::vector<FpMatrix> mats,
                       std::uint64_t weight, OracleTally& out) {
    const Fp p = space.field().p();
    std::vector<Fp*> slots;
    for (auto h : ev.free_arrows())
        for (auto& x : mats[h].a) slots.push_back(&x);
    for (auto* s : slots) *s = 0;
    const std::uint64_t n = space.checked_count(slots.size());
    std::uint64_t semi = 0;
    std::map<long, std::uint64_t> stable;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (i > 0)
            for (std::size_t k = slots.size(); k-- > 0;) {
                if (++*slots[k] < p) break;
                *slots[k] = 0;
            }
        const auto v = ev.classify(mats);
        if (!v.semistable) continue;
        ++semi;
        if (v.stable) ++stable[ev.end_dim(mats)];
    }
    const mpz_class w(static_cast<unsigned long>(weight));
    out.points += w * mpz_class(static_cast<unsigned long>(n));
    out.semistable += w * mpz_class(static_cast<unsigned long>(semi));
    for (const auto& [r, c] : stable) out.stable_by_end_dim[r] += w * mpz_class(static_cast<unsigned long>(c));
}

inline std::size_t slicing_arrow(const RepresentationSpace& space) {
    std::size_t best = 0, best_dim = 0;
    for (std::size_t h = 0; h < space.arrows().size(); ++h) {
        const auto& a = space.arrows()[h];
        if (a.rows * a.cols > best_dim) {
            best_dim = a.rows * a.cols;
            best = h;
        }
    }
    return best_dim == 0 ? space.arrows().size() : best;
}

}  // namespace detail

/// Exhaustive tally of R_alpha(F_p). With slicing, one arrow is reduced to
/// orbit representatives and each representative is weighted by its orbit
/// size; every predicate involved is GL_alpha-invariant.
inline OracleTally tally(const Quiver& q, const DimVector& alpha, const Stability& theta, Fp p,
                         const OracleOptions& opt = {}) {
    RepresentationSpace space(q, alpha, p, opt);
    std::vector<FpMatrix> mats;
    for (const auto& a : space.arrows()) mats.emplace_back(a.rows, a.cols);
    OracleTally total;
    const std::size_t h = opt.slicing ? detail::slicing_arrow(space) : space.arrows().size();
    if (h == space.arrows().size()) {
        space.checked_count(space.dimension());
        PointEvaluator ev(space, theta);
        detail::tally_free(space, ev, mats, 1, total);
        return total;
    }
    const auto& a = space.arrows()[h];
    const std::uint64_t rest = space.checked_count(space.dimension() - a.rows * a.cols);
    const ArrowOrbits orbits = arrow_orbits(space, h);
    if (orbits.reps.size() > opt.budget / rest)
        throw BudgetExceeded("oracle: " + std::to_string(orbits.reps.size()) + " orbit representatives x " +
                             std::to_string(rest) + " points exceed the budget");
    const std::size_t nreps = orbits.reps.size();
    space.tuples(theta);  // filled before the workers share the space
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(nreps)));
    std::vector<OracleTally> partial(threads);
    auto work = [&](unsigned t) {
        // contiguous block [lo, hi) of representatives
        const std::size_t lo = nreps * t / threads, hi = nreps * (t + 1) / threads;
        for (std::size_t k = lo; k < hi; ++k) {
            std::vector<FpMatrix> m = mats;
            m[h] = space.matrix_from_code(h, orbits.reps[k]);
            PointEvaluator ev(space, theta, {{h, m[h]}});
            detail::tally_free(space, ev, std::move(m), orbits.sizes[k], partial[t]);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& part : partial) total += part;
    return total;
}

/// #R^ss_alpha(F_p) / #GL_alpha(F_p).
inline BigRational count_semistable_ratio(const OracleTally& t, const DimVector& alpha, Fp p) {
    BigRational r(t.semistable, gl_alpha_order(alpha, p));
    r.canonicalize();
    return r;
}

/// #R_alpha(F_p) / #GL_alpha(F_p).
inline BigRational count_point_ratio(const OracleTally& t, const DimVector& alpha, Fp p) {
    BigRational r(t.points, gl_alpha_order(alpha, p));
    r.canonicalize();
    return r;
}

/// Classes of stable points with dim End = r: the stabiliser of such a point
/// is F_{p^r}^*, so each orbit has #GL_alpha / (p^r - 1) points.
inline mpz_class count_stable_with_r(const OracleTally& t, const DimVector& alpha, Fp p, long r) {
    if (r < 1) throw PreconditionError("count_stable_with_r: r must be >= 1");
    if (alpha.is_zero()) return 0;
    auto it = t.stable_by_end_dim.find(r);
    if (it == t.stable_by_end_dim.end()) return 0;
    mpz_class pr;
    mpz_ui_pow_ui(pr.get_mpz_t(), p, static_cast<unsigned long>(r));
    const mpz_class num = it->second * (pr - 1);
    const mpz_class gl = gl_alpha_order(alpha, p);
    if (!mpz_divisible_p(num.get_mpz_t(), gl.get_mpz_t()))
        throw InvariantViolation("oracle: stable points with dim End = " + std::to_string(r) +
                                 " do not split into orbits of size #GL/(p^r-1) for " + alpha.to_string());
    return num / gl;
}

inline mpz_class count_abs_stable_classes(const OracleTally& t, const DimVector& alpha, Fp p) {
    return count_stable_with_r(t, alpha, p, 1);
}

inline BigRational count_semistable_ratio(const Quiver& q, const DimVector& alpha, const Stability& theta, Fp p,
                                          const OracleOptions& opt = {}) {
    return count_semistable_ratio(tally(q, alpha, theta, p, opt), alpha, p);
}
inline mpz_class count_abs_stable_classes(const Quiver& q, const DimVector& alpha, const Stability& theta, Fp p,
                                          const OracleOptions& opt = {}) {
    return count_abs_stable_classes(tally(q, alpha, theta, p, opt), alpha, p);
}
inline mpz_class count_stable_with_r(const Quiver& q, const DimVector& alpha, const Stability& theta, Fp p, long r,
                                     const OracleOptions& opt = {}) {
    return count_stable_with_r(tally(q, alpha, theta, p, opt), alpha, p, r);
}

}  // namespace qstable::oracle
