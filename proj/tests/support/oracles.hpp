#pragma once

// Plain scalar-loop references, written independently of the tensor code.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <random>
#include <vector>

#include "hsk/cells/cells.hpp"

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major, [out][in]

inline double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Mat to_mat(const hsk::diff::Tensor<double>& t) {
    Mat m(t.rows(), Vec(t.cols()));
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.cols(); ++j) m[i][j] = t(i, j);
    }
    return m;
}

inline Vec to_vec(const hsk::diff::Tensor<double>& t) { return Vec(t.values().begin(), t.values().end()); }

inline Vec affine(const Mat& W, const Vec& x, const Mat& U, const Vec& g, const Vec& b) {
    Vec out(W.size());
    for (std::size_t i = 0; i < W.size(); ++i) {
        double acc = b[i];
        for (std::size_t j = 0; j < x.size(); ++j) acc += W[i][j] * x[j];
        for (std::size_t j = 0; j < g.size(); ++j) acc += U[i][j] * g[j];
        out[i] = acc;
    }
    return out;
}

struct Gru {
    Mat Wz, Wr, W, Uz, Ur, U;
    Vec bz, br, b, bn;

    explicit Gru(const hsk::cells::GruParams<double>& p)
        : Wz(to_mat(p.W_z)), Wr(to_mat(p.W_r)), W(to_mat(p.W)), Uz(to_mat(p.U_z)), Ur(to_mat(p.U_r)),
          U(to_mat(p.U)), bz(to_vec(p.b_z)), br(to_vec(p.b_r)), b(to_vec(p.b)), bn(to_vec(p.b_n)) {}

    Vec step(const Vec& x, const Vec& g) const {
        const std::size_t n = g.size();
        Vec z(n), r(n), out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double az = bz[i], ar = br[i];
            for (std::size_t j = 0; j < x.size(); ++j) {
                az += Wz[i][j] * x[j];
                ar += Wr[i][j] * x[j];
            }
            for (std::size_t j = 0; j < n; ++j) {
                az += Uz[i][j] * g[j];
                ar += Ur[i][j] * g[j];
            }
            z[i] = sig(az);
            r[i] = sig(ar);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double ug = bn[i];
            for (std::size_t j = 0; j < n; ++j) ug += U[i][j] * g[j];
            double a = b[i] + r[i] * ug;
            for (std::size_t j = 0; j < x.size(); ++j) a += W[i][j] * x[j];
            const double cand = std::tanh(a);
            out[i] = cand + z[i] * (g[i] - cand);
        }
        return out;
    }
};

struct Lstm {
    Mat Wi, Wf, Wm, Wo, Ui, Uf, Um, Uo;
    Vec bi, bf, bm, bo;

    explicit Lstm(const hsk::cells::LstmParams<double>& p)
        : Wi(to_mat(p.W_i)), Wf(to_mat(p.W_f)), Wm(to_mat(p.W_m)), Wo(to_mat(p.W_o)), Ui(to_mat(p.U_i)),
          Uf(to_mat(p.U_f)), Um(to_mat(p.U_m)), Uo(to_mat(p.U_o)), bi(to_vec(p.b_i)), bf(to_vec(p.b_f)),
          bm(to_vec(p.b_m)), bo(to_vec(p.b_o)) {}

    // Returns (g, c).
    std::pair<Vec, Vec> step(const Vec& x, const Vec& g, const Vec& c) const {
        const Vec ai = affine(Wi, x, Ui, g, bi), af = affine(Wf, x, Uf, g, bf), am = affine(Wm, x, Um, g, bm),
                  ao = affine(Wo, x, Uo, g, bo);
        Vec gn(g.size()), cn(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            cn[i] = sig(af[i]) * c[i] + sig(ai[i]) * std::tanh(am[i]);
            gn[i] = sig(ao[i]) * std::tanh(cn[i]);
        }
        return {gn, cn};
    }
};

inline void fill(std::initializer_list<hsk::diff::Tensor<double>*> ts, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    for (auto* t : ts) {
        for (auto& v : t->values()) v = u(rng);
    }
}

inline void randomize(hsk::cells::GruParams<double>& p, std::mt19937_64& rng, double scale) {
    fill({&p.W_z, &p.W_r, &p.W, &p.U_z, &p.U_r, &p.U, &p.b_z, &p.b_r, &p.b, &p.b_n}, rng, scale);
}

inline void randomize(hsk::cells::LstmParams<double>& p, std::mt19937_64& rng, double scale) {
    fill({&p.W_i, &p.W_f, &p.W_m, &p.W_o, &p.U_i, &p.U_f, &p.U_m, &p.U_o, &p.b_i, &p.b_f, &p.b_m, &p.b_o}, rng,
         scale);
}

}  // namespace oracle
