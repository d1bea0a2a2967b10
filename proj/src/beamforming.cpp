// SPDX-License-Identifier: Apache-2.0
//
// irsim: link-level simulator for IRS-assisted multi-user MISO downlink
// Copyright (C) 2026 The irsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irsim/beamforming.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace irsim
{

IrsPhaseVector IrsPhaseVector::all_ones(int n)
{
    return {cvec::Ones(n)};
}

double IrsPhaseVector::modulus_defect() const
{
    if (v.size() == 0)
        return 0.0;
    return (v.cwiseAbs().array() - 1.0).abs().maxCoeff();
}

double PrecoderSolution::total_power() const
{
    double total = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
        total += p[k] * g[k].squaredNorm();
    return total;
}

LinkChannels LinkChannels::from(const ChannelSet &cs)
{
    return {cs.hd, cs.h0};
}

LinkChannels LinkChannels::from(const ChannelEstimateSet &est)
{
    LinkChannels ch;
    ch.hd = est.hd_hat;
    bool with_irs = false;
    for (const auto &cols : est.h0_hat)
        with_irs = with_irs || !cols.empty();
    if (with_irs)
        for (int k = 0; k < static_cast<int>(est.hd_hat.size()); ++k)
            ch.h0.push_back(est.h0_matrix(k));
    return ch;
}

cvec LinkChannels::effective(int k, const cvec &v) const
{
    const auto ku = static_cast<std::size_t>(k);
    if (h0.empty())
        return hd[ku];
    return hd[ku] + h0[ku] * v;
}

std::vector<cvec> LinkChannels::effective(const cvec &v) const
{
    std::vector<cvec> out;
    out.reserve(hd.size());
    for (int k = 0; k < this->k(); ++k)
        out.push_back(effective(k, v));
    return out;
}

PrecoderSolution mrt(const cvec &h_eff, double p_t)
{
    const double norm = h_eff.norm();
    if (norm == 0.0)
        throw DegenerateChannelError("mrt: effective channel is zero.");
    return {{h_eff / norm}, {p_t}};
}

IrsPhaseVector irs_phases_single_user(const cmat &h0, const cvec &hd)
{
    if (h0.rows() != hd.size())
        throw DomainError("irs_phases_single_user: dimension mismatch.");
    if (hd.squaredNorm() == 0.0)
        throw DegenerateChannelError("irs_phases_single_user: direct channel is zero.");

    const cvec w = h0.adjoint() * hd;
    cvec v(w.size());
    for (Eigen::Index n = 0; n < w.size(); ++n)
        v(n) = std::abs(w(n)) > 0.0 ? w(n) / std::abs(w(n)) : cplx(1.0, 0.0);
    return {v};
}

IrsPhaseVector irs_phases_aligned(const cmat &h0)
{
    Eigen::JacobiSVD<cmat> svd(h0, Eigen::ComputeThinU);
    const cvec u = svd.matrixU().col(0);
    const cvec w = h0.adjoint() * u;
    cvec v(w.size());
    for (Eigen::Index n = 0; n < w.size(); ++n)
        v(n) = std::abs(w(n)) > 0.0 ? w(n) / std::abs(w(n)) : cplx(1.0, 0.0);
    return {v};
}

// ---------- SINR helpers ----------

namespace
{

// a(k, j) = g_j^H h_k
cmat cross_gains(const std::vector<cvec> &h, const std::vector<cvec> &g)
{
    const auto k_users = static_cast<Eigen::Index>(h.size());
    cmat a(k_users, k_users);
    for (Eigen::Index k = 0; k < k_users; ++k)
        for (Eigen::Index j = 0; j < k_users; ++j)
            a(k, j) = g[static_cast<std::size_t>(j)].dot(h[static_cast<std::size_t>(k)]);
    return a;
}

void check_solution(const std::vector<cvec> &h, const PrecoderSolution &sol)
{
    if (sol.g.size() != h.size() || sol.p.size() != h.size())
        throw DomainError("precoder does not match the number of users.");
}

struct SinrTerms
{
    std::vector<double> signal;
    std::vector<double> interference; // includes noise
};

SinrTerms sinr_terms(const cmat &a, const PrecoderSolution &sol, double sigma2)
{
    const auto k_users = a.rows();
    SinrTerms t;
    for (Eigen::Index k = 0; k < k_users; ++k)
    {
        double interf = sigma2;
        for (Eigen::Index j = 0; j < k_users; ++j)
            if (j != k)
                interf += sol.p[static_cast<std::size_t>(j)] * std::norm(a(k, j));
        t.signal.push_back(sol.p[static_cast<std::size_t>(k)] * std::norm(a(k, k)));
        t.interference.push_back(interf);
    }
    return t;
}

std::vector<double> rates_from_sinr(const std::vector<double> &sinr)
{
    std::vector<double> r;
    r.reserve(sinr.size());
    for (double s : sinr)
        r.push_back(std::log2(1.0 + s));
    return r;
}

double softmin(const std::vector<double> &rates, double mu)
{
    const double r_min = *std::min_element(rates.begin(), rates.end());
    double acc = 0.0;
    for (double r : rates)
        acc += std::exp(-(r - r_min) / mu);
    return r_min - mu * std::log(acc);
}

std::vector<double> softmin_weights(const std::vector<double> &rates, double mu)
{
    const double r_min = *std::min_element(rates.begin(), rates.end());
    std::vector<double> w;
    double acc = 0.0;
    for (double r : rates)
    {
        w.push_back(std::exp(-(r - r_min) / mu));
        acc += w.back();
    }
    for (double &x : w)
        x /= acc;
    return w;
}

} // namespace

std::vector<double> downlink_sinr(const std::vector<cvec> &h_eff, const PrecoderSolution &sol, double sigma2)
{
    check_solution(h_eff, sol);
    const SinrTerms t = sinr_terms(cross_gains(h_eff, sol.g), sol, sigma2);
    std::vector<double> out;
    for (std::size_t k = 0; k < h_eff.size(); ++k)
        out.push_back(t.signal[k] / t.interference[k]);
    return out;
}

// ---------- Max-min SINR precoding ----------

MaxMinResult maxmin_precoder_detailed(const std::vector<cvec> &h_eff, double p_t, double sigma2,
                                      const MaxMinOptions &opts, const Eigen::VectorXd *warm_start)
{
    const auto k_users = static_cast<Eigen::Index>(h_eff.size());
    if (k_users == 0)
        throw DomainError("maxmin_precoder: no users.");
    if (!(p_t > 0.0) || !(sigma2 > 0.0))
        throw DomainError("maxmin_precoder: power budget and noise must be positive.");
    const Eigen::Index m = h_eff[0].size();
    for (const auto &h : h_eff)
    {
        if (h.size() != m)
            throw DomainError("maxmin_precoder: channels differ in length.");
        if (h.squaredNorm() == 0.0)
            throw DegenerateChannelError("maxmin_precoder: a user channel is zero.");
    }

    MaxMinResult res;
    if (k_users == 1)
    {
        res.solution = mrt(h_eff[0], p_t);
        res.uplink_power = Eigen::VectorXd::Constant(1, p_t);
        res.balanced_sinr = p_t * h_eff[0].squaredNorm() / sigma2;
        res.rate_weights = Eigen::VectorXd::Ones(1);
        return res;
    }

    // Work with noise-normalized channels; the optimal precoder is unchanged.
    const double scale = 1.0 / std::sqrt(sigma2);
    cmat h(m, k_users);
    for (Eigen::Index k = 0; k < k_users; ++k)
        h.col(k) = scale * h_eff[static_cast<std::size_t>(k)];
    const cmat gram = h.adjoint() * h;
    const cmat eye = cmat::Identity(k_users, k_users);

    Eigen::VectorXd q = Eigen::VectorXd::Constant(k_users, p_t / static_cast<double>(k_users));
    if (warm_start != nullptr && warm_start->size() == k_users && warm_start->minCoeff() > 0.0 &&
        warm_start->allFinite())
        q = *warm_start * (p_t / warm_start->sum());

    // With A = I + H Q H^H: A^{-1} H = H (I + Q G)^{-1} and
    // h_k^H A^{-1} h_k = [G (I + Q G)^{-1}]_kk, so all work stays K x K.
    cmat z;
    Eigen::VectorXd sinr(k_users);
    bool converged = false;
    int it = 0;
    for (;;)
    {
        const cmat x = eye + q.cast<cplx>().asDiagonal() * gram;
        z = x.partialPivLu().solve(eye);
        const cmat t = gram * z;
        for (Eigen::Index k = 0; k < k_users; ++k)
        {
            const double qt = q(k) * t(k, k).real();
            sinr(k) = qt / (1.0 - qt);
        }
        if (!sinr.allFinite() || sinr.minCoeff() <= 0.0)
            throw NumericalError("maxmin_precoder: uplink SINR is not finite.");

        const double gap = (sinr.maxCoeff() - sinr.minCoeff()) / sinr.minCoeff();
        if (gap < opts.tol)
        {
            converged = true;
            break;
        }
        if (it >= opts.max_iter)
            break;

        q = q.cwiseQuotient(sinr);
        q *= p_t / q.sum();
        ++it;
    }
    res.iterations = it;
    res.uplink_power = q;

    // MMSE receive filters double as downlink directions.
    const cmat u = h * z;
    std::vector<cvec> g;
    for (Eigen::Index k = 0; k < k_users; ++k)
    {
        const double nrm = u.col(k).norm();
        if (!(nrm > 0.0))
            throw NumericalError("maxmin_precoder: zero receive filter.");
        g.push_back(u.col(k) / nrm);
    }

    // Downlink powers p with p_k a_kk / gamma = sum_{j!=k} p_j a_kj + sum(p) / P_T:
    // p is the Perron vector of D^{-1} (Psi + 1 1^T / P_T), gamma its inverse root.
    Eigen::MatrixXd b(k_users, k_users);
    for (Eigen::Index k = 0; k < k_users; ++k)
    {
        const double akk = std::norm(g[static_cast<std::size_t>(k)].dot(h.col(k)));
        if (!(akk > 0.0))
            throw DegenerateChannelError("maxmin_precoder: user orthogonal to its own filter.");
        for (Eigen::Index j = 0; j < k_users; ++j)
        {
            const double akj = j == k ? 0.0 : std::norm(g[static_cast<std::size_t>(j)].dot(h.col(k)));
            b(k, j) = (akj + 1.0 / p_t) / akk;
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(b);
    if (es.info() != Eigen::Success)
        throw NumericalError("maxmin_precoder: eigen decomposition of the coupling matrix failed.");
    Eigen::Index top = 0;
    es.eigenvalues().real().maxCoeff(&top);
    const double lambda = es.eigenvalues()(top).real();
    Eigen::VectorXd w = es.eigenvectors().col(top).real();
    if (w.sum() < 0.0)
        w = -w;
    w = w.cwiseMax(0.0);
    if (!(lambda > 0.0) || !(w.sum() > 0.0))
        throw NumericalError("maxmin_precoder: no positive power allocation.");
    w *= p_t / w.sum();

    // Left Perron vector for the envelope weights.
    Eigen::EigenSolver<Eigen::MatrixXd> les(b.transpose());
    if (les.info() != Eigen::Success)
        throw NumericalError("maxmin_precoder: eigen decomposition of the coupling matrix failed.");
    les.eigenvalues().real().maxCoeff(&top);
    Eigen::VectorXd l = les.eigenvectors().col(top).real();
    if (l.sum() < 0.0)
        l = -l;
    l = l.cwiseMax(0.0);
    res.rate_weights = l.cwiseProduct(w);
    if (!(res.rate_weights.sum() > 0.0))
        throw NumericalError("maxmin_precoder: degenerate dual weights.");
    res.rate_weights /= res.rate_weights.sum();

    res.solution.g = std::move(g);
    res.solution.p.assign(w.data(), w.data() + w.size());
    res.balanced_sinr = 1.0 / lambda;

    if (!converged)
        throw ConvergenceError("maxmin_precoder: uplink powers did not balance within " +
                                   std::to_string(opts.max_iter) + " iterations.",
                               std::move(res));
    return res;
}

PrecoderSolution maxmin_precoder(const std::vector<cvec> &h_eff, double p_t, double sigma2,
                                 const MaxMinOptions &opts)
{
    return maxmin_precoder_detailed(h_eff, p_t, sigma2, opts).solution;
}

// ---------- Soft-min objective ----------

double softmin_rate(const LinkChannels &ch, const cvec &v, const PrecoderSolution &sol, double sigma2, double mu)
{
    if (!(mu > 0.0))
        throw DomainError("softmin_rate: temperature must be positive.");
    return softmin(rates_from_sinr(downlink_sinr(ch.effective(v), sol, sigma2)), mu);
}

namespace
{

// sum_k w_k dR_k / d conj(v), R_k = log2(1 + SINR_k) with the precoder fixed.
// With w = nullptr the soft-min weights at temperature mu are used.
cvec weighted_rate_gradient(const LinkChannels &ch, const cvec &v, const PrecoderSolution &sol, double sigma2,
                            const Eigen::VectorXd *weights, double mu)
{
    const auto k_users = static_cast<Eigen::Index>(ch.k());
    cvec grad = cvec::Zero(v.size());
    if (!ch.has_irs())
        return grad;

    const std::vector<cvec> h = ch.effective(v);
    check_solution(h, sol);
    const cmat a = cross_gains(h, sol.g);
    const SinrTerms t = sinr_terms(a, sol, sigma2);

    std::vector<double> sinr;
    for (Eigen::Index k = 0; k < k_users; ++k)
        sinr.push_back(t.signal[static_cast<std::size_t>(k)] / t.interference[static_cast<std::size_t>(k)]);
    std::vector<double> w;
    if (weights)
    {
        if (weights->size() != k_users)
            throw DomainError("rate gradient: weights do not match the number of users.");
        w.assign(weights->data(), weights->data() + k_users);
    }
    else
        w = softmin_weights(rates_from_sinr(sinr), mu);

    cmat gmat(h[0].size(), k_users);
    for (Eigen::Index j = 0; j < k_users; ++j)
        gmat.col(j) = sol.g[static_cast<std::size_t>(j)];

    for (Eigen::Index k = 0; k < k_users; ++k)
    {
        const auto ku = static_cast<std::size_t>(k);
        if (w[ku] == 0.0)
            continue;
        // Column j: H_0,k^H g_j. d|g_j^H h_k|^2 / d conj(v) = (g_j^H h_k) H_0,k^H g_j.
        const cmat b = ch.h0[ku].adjoint() * gmat;
        const cvec d_signal = sol.p[ku] * a(k, k) * b.col(k);
        cvec d_interf = cvec::Zero(v.size());
        for (Eigen::Index j = 0; j < k_users; ++j)
            if (j != k)
                d_interf += sol.p[static_cast<std::size_t>(j)] * a(k, j) * b.col(j);

        const double s = t.signal[ku];
        const double i = t.interference[ku];
        const cvec d_sinr = (d_signal * i - s * d_interf) / (i * i);
        grad += (w[ku] / ((1.0 + sinr[ku]) * std::numbers::ln2)) * d_sinr;
    }
    return grad;
}

} // namespace

cvec softmin_rate_gradient(const LinkChannels &ch, const cvec &v, const PrecoderSolution &sol, double sigma2,
                           double mu)
{
    if (!(mu > 0.0))
        throw DomainError("softmin_rate_gradient: temperature must be positive.");
    return weighted_rate_gradient(ch, v, sol, sigma2, nullptr, mu);
}

cvec balanced_rate_gradient(const LinkChannels &ch, const cvec &v, const MaxMinResult &mm, double sigma2)
{
    return weighted_rate_gradient(ch, v, mm.solution, sigma2, &mm.rate_weights, 1.0);
}

// ---------- Projected gradient ascent ----------

void project_unit_modulus(cvec &v, Rng &rng)
{
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (Eigen::Index n = 0; n < v.size(); ++n)
    {
        const double mag = std::abs(v(n));
        if (mag > 0.0 && std::isfinite(mag))
            v(n) /= mag;
        else
            v(n) = std::polar(1.0, phase(rng));
    }
}

namespace
{

struct Iterate
{
    cvec v;
    MaxMinResult precoder;
    double min_rate = 0.0;
};

Iterate evaluate_iterate(const LinkChannels &ch, cvec v, double p_t, const MaxMinOptions &opts,
                         const Eigen::VectorXd *warm)
{
    Iterate it;
    it.v = std::move(v);
    const std::vector<cvec> h = ch.effective(it.v);
    try
    {
        it.precoder = maxmin_precoder_detailed(h, p_t, 1.0, opts, warm);
    }
    catch (const ConvergenceError &e)
    {
        // The last iterate is still an exactly balanced, power-feasible precoder.
        it.precoder = e.last_iterate();
    }
    const std::vector<double> sinr = downlink_sinr(h, it.precoder.solution, 1.0);
    it.min_rate = std::log2(1.0 + *std::min_element(sinr.begin(), sinr.end()));
    return it;
}

PgaResult run_from(const LinkChannels &ch, cvec v0, double p_t, const PgaOptions &opts, Rng &rng)
{
    PgaResult res;
    Iterate cur = evaluate_iterate(ch, std::move(v0), p_t, opts.precoder, nullptr);
    res.trace.push_back(cur.min_rate);

    double mu = opts.mu_initial;
    // Starting step of the next search: twice the last accepted one, so
    // well-conditioned runs are not held to step_initial forever.
    const double step_cap = 1024.0 * opts.step_initial;
    double step_start = opts.step_initial;
    int outer = 0;
    while (outer < opts.max_outer && ch.has_irs())
    {
        if (outer > 0 && opts.mu_every > 0 && outer % opts.mu_every == 0)
            mu = std::max(mu * opts.mu_factor, opts.mu_min);
        ++outer;

        const PrecoderSolution &sol = cur.precoder.solution;
        Iterate next;
        bool accepted = false;

        // Backtracking along dir; with use_softmin the soft-min objective at the
        // current precoder must not drop either.
        auto try_direction = [&](const cvec &grad, bool use_softmin) {
            if (!grad.allFinite())
                throw NumericalError("irs_phases_multiuser_pga: gradient is not finite.");
            const double gmax = grad.cwiseAbs().maxCoeff();
            if (!(gmax > 0.0))
                return false;
            const double f_cur = use_softmin ? softmin_rate(ch, cur.v, sol, 1.0, mu) : 0.0;
            const cvec dir = grad / gmax;
            double step = step_start;
            for (int h = 0; h <= opts.max_halvings; ++h, step *= opts.backtrack)
            {
                cvec cand = cur.v + step * dir;
                project_unit_modulus(cand, rng);
                if (use_softmin && softmin_rate(ch, cand, sol, 1.0, mu) < f_cur)
                    continue;
                next = evaluate_iterate(ch, std::move(cand), p_t, opts.precoder, &cur.precoder.uplink_power);
                if (next.min_rate >= cur.min_rate)
                {
                    step_start = std::min(2.0 * step, step_cap);
                    return true;
                }
            }
            return false;
        };

        if (opts.direction == PgaDirection::Envelope)
            accepted = try_direction(balanced_rate_gradient(ch, cur.v, cur.precoder, 1.0), false);
        if (!accepted)
            accepted = try_direction(softmin_rate_gradient(ch, cur.v, sol, 1.0, mu), true);

        double change = 0.0;
        if (accepted)
        {
            change = (next.min_rate - cur.min_rate) / std::max(std::abs(cur.min_rate), 1e-300);
            cur = std::move(next);
            res.trace.push_back(cur.min_rate);
        }
        if (accepted && change >= opts.tol)
            continue;

        // Stalled. A common rotation of all phases changes only how the
        // reflected paths add to the direct ones, which is a saddle direction
        // the gradient cannot see (all elements aligned with a sum that opposes h_d).
        Iterate best;
        best.min_rate = cur.min_rate * (1.0 + opts.tol);
        bool escaped = false;
        for (int r = 1; r < opts.rotation_probes; ++r)
        {
            const cplx turn = std::polar(1.0, 2.0 * std::numbers::pi * r / opts.rotation_probes);
            Iterate cand = evaluate_iterate(ch, cur.v * turn, p_t, opts.precoder, &cur.precoder.uplink_power);
            if (cand.min_rate > best.min_rate)
            {
                best = std::move(cand);
                escaped = true;
            }
        }
        if (!escaped)
            break;
        cur = std::move(best);
        res.trace.push_back(cur.min_rate);
    }

    res.v.v = cur.v;
    res.precoder = cur.precoder.solution;
    res.outer_iterations = outer;
    return res;
}

} // namespace

PgaResult irs_phases_multiuser_pga(const LinkChannels &ch, double p_t, double sigma2, const PgaOptions &opts)
{
    if (ch.k() < 1)
        throw DomainError("irs_phases_multiuser_pga: no users.");
    if (!(sigma2 > 0.0))
        throw DomainError("irs_phases_multiuser_pga: noise power must be positive.");
    if (opts.restarts < 1)
        throw ConfigError("irs_phases_multiuser_pga: restarts must be >= 1.");

    // Noise-normalized copy so every internal quantity is O(SNR).
    const double scale = 1.0 / std::sqrt(sigma2);
    LinkChannels norm;
    for (const auto &h : ch.hd)
        norm.hd.push_back(scale * h);
    for (const auto &h : ch.h0)
        norm.h0.push_back(scale * h);
    const int n = norm.has_irs() ? static_cast<int>(norm.h0[0].cols()) : 0;

    Rng rng(opts.seed);
    PgaResult best;
    for (int r = 0; r < opts.restarts; ++r)
    {
        cvec v0 = cvec::Ones(n);
        if (r > 0)
        {
            v0 = complex_normal(n, rng);
            project_unit_modulus(v0, rng);
        }
        PgaResult res = run_from(norm, std::move(v0), p_t, opts, rng);
        if (r == 0 || res.trace.back() > best.trace.back())
            best = std::move(res);
    }
    return best;
}

} // namespace irsim
