#pragma once

#include <vector>

#include "emu/rational.hpp"

namespace emu {

// min c.x  subject to  A x <= b, x >= 0, exactly.
//
// Two-phase simplex over an integer tableau: every entry is an integer and
// the physical value is entry/denom with one shared positive denominator
// (integer pivoting; entries stay subdeterminant-sized and each pivot does
// one exact division per entry instead of rational gcd churn).  Entering
// columns follow Dantzig's rule until pivots stall, then Bland's rule,
// which cannot cycle.  On infeasibility the phase-1 duals give a Farkas
// vector y >= 0 with A^T y >= 0 and b^T y < 0.
class Simplex {
public:
    struct Row {
        std::vector<std::pair<int, Rat>> coeffs; // (column, value)
        Rat rhs;
    };
    enum class Status { Optimal, Infeasible, Unbounded };
    struct Result {
        Status status = Status::Optimal;
        std::vector<Rat> x;
        std::vector<Rat> farkas_y; // per input row, when infeasible
        Rat objective;
        long long pivots = 0;
    };

    static Result solve(int nvars, const std::vector<Row>& rows, const std::vector<Rat>& cost) {
        Simplex sx(nvars, rows, cost);
        return sx.run();
    }

private:
    int n_, m_, slack0_, art0_, nart_ = 0, width_;
    int obj1_, obj2_; // tableau row indices of the phase objectives
    std::vector<std::vector<BigInt>> t_;
    BigInt den_{1};
    std::vector<int> basis_;
    std::vector<int> art_row_;
    std::vector<Rat> row_scale_; // original row i was multiplied by this
    long long pivots_ = 0;

    Simplex(int nvars, const std::vector<Row>& rows, const std::vector<Rat>& cost)
        : n_(nvars), m_(static_cast<int>(rows.size())), slack0_(nvars), art0_(nvars + m_) {
        art_row_.assign(m_, -1);
        for (int i = 0; i < m_; ++i)
            if (rows[i].rhs.sign() < 0) art_row_[i] = art0_ + nart_++;
        width_ = n_ + m_ + nart_;
        obj1_ = m_;
        obj2_ = m_ + 1;
        t_.assign(m_ + 2, std::vector<BigInt>(width_ + 1, BigInt(0)));
        basis_.assign(m_, -1);
        row_scale_.assign(m_, Rat(1));

        for (int i = 0; i < m_; ++i) {
            // scale the row to integers: multiply by sign * lcm-of-denoms
            BigInt mult(1);
            for (const auto& [j, v] : rows[i].coeffs) {
                (void)j;
                BigInt g = BigInt::gcd(mult, v.den());
                mult = mult / g * v.den();
            }
            {
                BigInt g = BigInt::gcd(mult, rows[i].rhs.den());
                mult = mult / g * rows[i].rhs.den();
            }
            int sgn = rows[i].rhs.sign() < 0 ? -1 : 1;
            row_scale_[i] = Rat(mult, BigInt(1)); // positive row multiplier
            for (const auto& [j, v] : rows[i].coeffs) {
                EMU_INTERNAL_CHECK(j >= 0 && j < n_, "column out of range");
                BigInt scaled = v.num() * (mult / v.den());
                t_[i][j] = sgn < 0 ? -scaled : scaled;
            }
            t_[i][slack0_ + i] = BigInt(sgn);
            {
                BigInt scaled = rows[i].rhs.num() * (mult / rows[i].rhs.den());
                t_[i][width_] = sgn < 0 ? -scaled : scaled;
            }
            if (art_row_[i] >= 0) {
                t_[i][art_row_[i]] = BigInt(1);
                basis_[i] = art_row_[i];
            } else {
                basis_[i] = slack0_ + i;
            }
        }
        // phase-2 objective: integerize the cost vector
        BigInt cmult(1);
        for (int j = 0; j < n_; ++j) {
            BigInt g = BigInt::gcd(cmult, cost[j].den());
            cmult = cmult / g * cost[j].den();
        }
        cost_scale_ = Rat(cmult, BigInt(1));
        for (int j = 0; j < n_; ++j) t_[obj2_][j] = cost[j].num() * (cmult / cost[j].den());
        // phase-1 objective: sum of artificials, expressed over the initial
        // basis (subtract each artificial row so basic columns reduce to 0)
        for (int j = art0_; j < width_; ++j) t_[obj1_][j] = BigInt(1);
        for (int i = 0; i < m_; ++i) {
            if (art_row_[i] < 0) continue;
            for (int j = 0; j <= width_; ++j)
                if (!t_[i][j].is_zero()) t_[obj1_][j] = t_[obj1_][j] - t_[i][j];
        }
        // phase-2 row likewise must be reduced against the initial basis;
        // initial basic columns are slacks/artificials with zero cost, so
        // nothing to do
    }

    Rat cost_scale_{1};

    void pivot(int row, int col) {
        ++pivots_;
        const BigInt piv = t_[row][col];
        EMU_INTERNAL_CHECK(piv.sign() > 0, "pivot entry must be positive");
        int total = m_ + 2;
        bool rescale = piv != den_;
        for (int i = 0; i < total; ++i) {
            if (i == row) continue;
            const BigInt f = t_[i][col];
            if (f.is_zero()) {
                if (rescale)
                    for (int j = 0; j <= width_; ++j)
                        if (!t_[i][j].is_zero()) t_[i][j] = t_[i][j] * piv / den_;
                continue;
            }
            for (int j = 0; j <= width_; ++j) {
                BigInt v = t_[i][j] * piv - f * t_[row][j];
                if (!v.is_zero()) v = v / den_;
                t_[i][j] = std::move(v);
            }
        }
        den_ = piv;
        basis_[row] = col;
    }

    // one simplex phase on objective row `obj`; false when unbounded
    bool optimize(int obj, int ncols) {
        int stalled = 0;
        bool bland = false;
        while (true) {
            int col = -1;
            if (bland) {
                for (int j = 0; j < ncols; ++j)
                    if (t_[obj][j].sign() < 0) {
                        col = j;
                        break;
                    }
            } else {
                const BigInt* best = nullptr;
                for (int j = 0; j < ncols; ++j)
                    if (t_[obj][j].sign() < 0 && (!best || t_[obj][j] < *best)) {
                        best = &t_[obj][j];
                        col = j;
                    }
            }
            if (col < 0) return true;
            int row = -1;
            for (int i = 0; i < m_; ++i) {
                if (t_[i][col].sign() <= 0) continue;
                if (row < 0) {
                    row = i;
                    continue;
                }
                // compare rhs_i / a_i vs rhs_row / a_row
                BigInt lhs = t_[i][width_] * t_[row][col];
                BigInt rhs = t_[row][width_] * t_[i][col];
                int c = BigInt::cmp(lhs, rhs);
                if (c < 0 || (c == 0 && basis_[i] < basis_[row])) row = i;
            }
            if (row < 0) return false;
            bool degenerate = t_[row][width_].is_zero();
            pivot(row, col);
            if (degenerate) {
                if (++stalled > 40) bland = true;
            } else {
                stalled = 0;
                bland = false;
            }
        }
    }

    Result run() {
        Result res;
        if (nart_ > 0) {
            bool ok = optimize(obj1_, width_);
            EMU_INTERNAL_CHECK(ok, "phase-1 objective unbounded");
            // phase-1 optimum value = -t_[obj1_][rhs] / den
            if (t_[obj1_][width_].sign() != 0) {
                res.status = Status::Infeasible;
                res.pivots = pivots_;
                res.farkas_y.assign(m_, Rat(0));
                for (int i = 0; i < m_; ++i) {
                    // multiplier for the caller's row i: the slack column's
                    // reduced cost times the positive row scale
                    res.farkas_y[i] = Rat(t_[obj1_][slack0_ + i], den_) * row_scale_[i];
                    EMU_INTERNAL_CHECK(res.farkas_y[i].sign() >= 0,
                                       "negative Farkas multiplier");
                }
                return res;
            }
            // drive basic artificials out
            for (int i = 0; i < m_; ++i) {
                if (basis_[i] < art0_) continue;
                int col = -1;
                for (int j = 0; j < art0_; ++j)
                    if (!t_[i][j].is_zero()) {
                        col = j;
                        break;
                    }
                if (col >= 0) {
                    if (t_[i][col].sign() < 0) {
                        // flip the row so the pivot entry is positive; the row's
                        // rhs is zero here, so feasibility is untouched
                        for (int j = 0; j <= width_; ++j) t_[i][j] = -t_[i][j];
                    }
                    pivot(i, col);
                }
            }
        }
        bool ok = optimize(obj2_, art0_);
        if (!ok) {
            res.status = Status::Unbounded;
            res.pivots = pivots_;
            return res;
        }
        res.status = Status::Optimal;
        res.x.assign(n_, Rat(0));
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) res.x[basis_[i]] = Rat(t_[i][width_], den_);
        res.objective = Rat(0);
        res.pivots = pivots_;
        // objective value = -t_[obj2_][rhs]/den, unscaled
        res.objective = Rat(-t_[obj2_][width_], den_) / cost_scale_;
        return res;
    }
};

} // namespace emu
