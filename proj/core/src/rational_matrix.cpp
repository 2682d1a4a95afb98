#include "sinv/rational_matrix.hpp"

#include <complex>
#include <random>

namespace sinv {

namespace {

// Zero test by evaluation: all of 5 random points on [0.3,3] (alternating real
// axis / imaginary axis) must be below tolerance. Points landing on a pole are
// redrawn.
bool is_zero_rf(const RationalFunction& f, std::mt19937_64& rng) {
    if (f.is_zero()) return true;
    std::uniform_real_distribution<double> mag(0.3, 3.0);
    int checked = 0;
    while (checked < 5) {
        double v = mag(rng);
        std::complex<double> s0 = (checked % 2 == 0) ? std::complex<double>(v, 0.0)
                                                     : std::complex<double>(0.0, v);
        try {
            if (std::abs(f.eval(s0)) > kEvalTol) return false;
        } catch (const PoleAtEvaluationPoint&) {
            continue;  // redraw
        }
        ++checked;
    }
    return true;
}

// Row-echelon elimination using the first `pivot_cols` columns for pivots;
// row operations apply across the whole matrix. Returns pivot column indices.
std::vector<int> eliminate(RationalMatrix& a, int pivot_cols, std::mt19937_64& rng) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < pivot_cols && row < a.rows(); ++col) {
        int pivot = -1;
        for (int r = row; r < a.rows(); ++r) {
            if (!is_zero_rf(a.at(r, col), rng)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != row)
            for (int c = 0; c < a.cols(); ++c) std::swap(a.at(row, c), a.at(pivot, c));
        for (int r = row + 1; r < a.rows(); ++r) {
            if (is_zero_rf(a.at(r, col), rng)) continue;
            RationalFunction factor = a.at(r, col) / a.at(row, col);
            for (int c = col; c < a.cols(); ++c)
                a.at(r, c) = a.at(r, c) - factor * a.at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

RationalMatrix RationalMatrix::column(const std::vector<RationalFunction>& entries) {
    RationalMatrix m(static_cast<int>(entries.size()), 1);
    for (int i = 0; i < m.rows(); ++i) m.at(i, 0) = entries[static_cast<std::size_t>(i)];
    return m;
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = RationalFunction::constant(1.0);
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
    RationalMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            RationalFunction acc;
            for (int k = 0; k < cols_; ++k) acc = acc + at(i, k) * o.at(k, j);
            out.at(i, j) = acc;
        }
    return out;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

RationalMatrix RationalMatrix::augment(const RationalMatrix& o) const {
    RationalMatrix out(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) out.at(i, cols_ + j) = o.at(i, j);
    }
    return out;
}

int rank_rs(const RationalMatrix& m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RationalMatrix work = m;
    return static_cast<int>(eliminate(work, m.cols(), rng).size());
}

bool image_membership(const RationalMatrix& p, const RationalMatrix& y, std::uint64_t seed) {
    return rank_rs(p.augment(y), seed) == rank_rs(p, seed);
}

RationalMatrix solve_exact(const RationalMatrix& p, const RationalMatrix& y,
                           std::uint64_t seed) {
    if (y.cols() != 1 || y.rows() != p.rows())
        throw Error("solve_exact expects a single right-hand column matching P's rows");
    std::mt19937_64 rng(seed);
    RationalMatrix aug = p.augment(y);
    std::vector<int> pivots = eliminate(aug, p.cols(), rng);
    int rank = static_cast<int>(pivots.size());
    for (int r = rank; r < aug.rows(); ++r)
        if (!is_zero_rf(aug.at(r, p.cols()), rng)) throw NotInImage();
    if (rank < p.cols()) throw Underdetermined(p.cols() - rank);
    RationalMatrix u(p.cols(), 1);
    for (int r = rank - 1; r >= 0; --r) {
        int pc = pivots[static_cast<std::size_t>(r)];
        RationalFunction acc = aug.at(r, p.cols());
        for (int c = pc + 1; c < p.cols(); ++c) acc = acc - aug.at(r, c) * u.at(c, 0);
        u.at(pc, 0) = acc / aug.at(r, pc);
    }
    return u;
}

const char* to_string(LeftInverseKind kind) {
    return kind == LeftInverseKind::Averaged ? "averaged" : "gram";
}

LeftInverseKind left_inverse_kind_from_string(const std::string& name) {
    if (name == "averaged") return LeftInverseKind::Averaged;
    if (name == "gram") return LeftInverseKind::GramBased;
    throw Error("unknown left-inverse kind '" + name + "' (expected averaged|gram)");
}

RationalMatrix left_inverse(const RationalMatrix& p, LeftInverseKind kind,
                            std::uint64_t seed) {
    if (kind == LeftInverseKind::Averaged) {
        if (p.cols() != 1) throw Error("averaged left inverse requires a single column");
        int n = p.rows();
        RationalMatrix out(1, n);
        for (int i = 0; i < n; ++i) {
            if (p.at(i, 0).is_zero()) throw ZeroEntry();
            out.at(0, i) = p.at(i, 0).reciprocal() * (1.0 / n);
        }
        return out;
    }
    // GramBased: (P^T P)^{-1} P^T. Chained rational arithmetic explodes in
    // degree here, so work with one polynomial matrix fraction instead:
    // P = N/d with d the product of the distinct entry denominators, then
    // P+ = d * adj(N^T N) N^T / det(N^T N) entirely in polynomial arithmetic.
    if (rank_rs(p, seed) < p.cols()) throw RankDeficient();
    int rows = p.rows(), n = p.cols();

    std::vector<Polynomial> dens;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < n; ++j) {
            const Polynomial& den = p.at(i, j).den();
            bool seen = false;
            for (const auto& known : dens) seen = seen || known.same_as(den, 1e-12);
            if (!seen && den.degree() >= 1) dens.push_back(den);
        }
    Polynomial d = Polynomial::constant(1.0);
    for (const auto& den : dens) d = d * den;

    std::vector<std::vector<Polynomial>> N(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < n; ++j)
            N[static_cast<std::size_t>(i)].push_back(
                p.at(i, j).num() * poly_divmod(d, p.at(i, j).den()).first);

    std::vector<std::vector<Polynomial>> G(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Polynomial acc;
            for (int k = 0; k < rows; ++k)
                acc = acc + N[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                                N[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            G[static_cast<std::size_t>(i)].push_back(acc);
        }

    // Laplace determinant/adjugate; n is the finger-count scale, so tiny.
    auto minor_det = [](auto&& self, const std::vector<std::vector<Polynomial>>& m,
                        std::vector<int> rs, std::vector<int> cs) -> Polynomial {
        if (rs.size() == 1)
            return m[static_cast<std::size_t>(rs[0])][static_cast<std::size_t>(cs[0])];
        Polynomial acc;
        for (std::size_t k = 0; k < cs.size(); ++k) {
            std::vector<int> sub_rs(rs.begin() + 1, rs.end());
            std::vector<int> sub_cs;
            for (std::size_t j = 0; j < cs.size(); ++j)
                if (j != k) sub_cs.push_back(cs[j]);
            Polynomial term = m[static_cast<std::size_t>(rs[0])][static_cast<std::size_t>(cs[k])] *
                              self(self, m, sub_rs, sub_cs);
            acc = (k % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    Polynomial det = minor_det(minor_det, G, all, all);
    if (det.is_zero()) throw RankDeficient();

    RationalMatrix out(n, rows);
    for (int k = 0; k < n; ++k)
        for (int r = 0; r < rows; ++r) {
            Polynomial acc;
            for (int i = 0; i < n; ++i) {
                // adj(G)_{ki} = (-1)^{k+i} det of G without row i / column k
                std::vector<int> rs, cs;
                for (int t = 0; t < n; ++t) {
                    if (t != i) rs.push_back(t);
                    if (t != k) cs.push_back(t);
                }
                Polynomial cof = n == 1 ? Polynomial::constant(1.0)
                                        : minor_det(minor_det, G, rs, cs);
                Polynomial term = cof * N[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
                acc = ((i + k) % 2 == 0) ? acc + term : acc - term;
            }
            out.at(k, r) = RationalFunction(acc * d, det);
        }
    return out;
}

}  // namespace sinv
