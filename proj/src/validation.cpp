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

#include "irsim/validation.hpp"

#include "irsim/beamforming.hpp"
#include "irsim/channel.hpp"
#include "irsim/estimation.hpp"
#include "irsim/evaluate.hpp"
#include "irsim/linalg.hpp"
#include "irsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace irsim
{

bool SuiteReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
}

namespace
{

std::string fmt(const char *pattern, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, x);
    return buf;
}

Check upper(std::string metric, double value, double limit, bool strict = true)
{
    const bool ok = std::isfinite(value) && (strict ? value < limit : value <= limit);
    return {std::move(metric), value, limit, strict ? "<" : "<=", ok};
}

// Accumulates E|h - h_hat|^2, E[h_hat e^H] and E[h_hat h_hat^H].
struct ErrorMoments
{
    double sq_err = 0.0;
    cmat cross, est;
    int count = 0;

    explicit ErrorMoments(int m) : cross(cmat::Zero(m, m)), est(cmat::Zero(m, m)) {}

    void add(const cvec &truth, const cvec &estimate)
    {
        const cvec e = truth - estimate;
        sq_err += e.squaredNorm();
        cross += estimate * e.adjoint();
        est += estimate * estimate.adjoint();
        ++count;
    }

    double mse() const { return sq_err / count; }
    double orthogonality() const
    {
        const double denom = est.norm();
        return denom > 0.0 ? cross.norm() / denom : 0.0;
    }
};

void mse_checks(SuiteReport &rep, const std::string &tag, const ErrorMoments &mom, double analytic, double prior,
                const MmseSuiteOptions &opts)
{
    if (analytic <= 1e-14 * prior)
    {
        // Noise-free observation: both sides must vanish.
        rep.checks.push_back(upper(tag + " empirical mse / prior", mom.mse() / prior, 1e-20, false));
        return;
    }
    rep.checks.push_back(upper(tag + " mse relative error", std::abs(mom.mse() - analytic) / analytic, opts.mse_tol));
    rep.checks.push_back(upper(tag + " orthogonality residual", mom.orthogonality(), opts.orthogonality_tol));
}

} // namespace

SuiteReport mmse_suite(const MmseSuiteOptions &opts)
{
    if (opts.trials < 2 || opts.m < 1)
        throw ConfigError("mmse_suite: need trials >= 2 and m >= 1.");
    SuiteReport rep{"mmse", {}};

    const int m = opts.m;
    const cmat prior = exp_correlation(m, 0.5);
    const cmat prior_sqrt = hermitian_sqrt(prior);

    std::vector<std::pair<std::string, double>> levels;
    if (opts.absolute_noise)
    {
        if (*opts.absolute_noise < 0.0)
            throw DomainError("mmse_suite: noise variance must be >= 0.");
        levels.emplace_back("noise=" + fmt("%g", *opts.absolute_noise), *opts.absolute_noise);
    }
    else
        for (double f : opts.noise_levels)
            levels.emplace_back("noise=" + fmt("%g", f) + "x prior", f);

    for (std::size_t li = 0; li < levels.size(); ++li)
    {
        const auto &[label, s] = levels[li];
        Rng rng = make_stream(opts.seed, li, 0);

        // Direct link: prior CN(0, R) with unit diagonal.
        ErrorMoments direct(m);
        cmat err_cov;
        for (int t = 0; t < opts.trials; ++t)
        {
            const cvec h = prior_sqrt * complex_normal(m, rng);
            const cvec r = h + std::sqrt(s) * complex_normal(m, rng);
            LmmseResult est = lmmse_direct(r, prior, s);
            if (t == 0)
                err_cov = est.err_cov;
            direct.add(h, est.estimate);
        }
        mse_checks(rep, "direct " + label, direct, err_cov.trace().real(), prior.trace().real(), opts);

        // Cascaded column: h1_col * h2_n with unit-modulus h1_col and unit
        // prior variance, so every entry has unit prior variance.
        cvec h1_col(m);
        for (int i = 0; i < m; ++i)
            h1_col(i) = std::polar(1.0, 2.0 * std::numbers::pi * std::uniform_real_distribution<double>()(rng));
        const double var_n = 1.0;
        ErrorMoments casc(m);
        for (int t = 0; t < opts.trials; ++t)
        {
            const cvec h0 = h1_col * (std::sqrt(var_n) * complex_normal(rng));
            const cvec r0 = std::sqrt(s) * complex_normal(m, rng);
            const cvec rt = h0 + std::sqrt(s) * complex_normal(m, rng);
            LmmseResult est = lmmse_cascaded(rt, r0, h1_col, var_n, s);
            if (t == 0)
                err_cov = est.err_cov;
            casc.add(h0, est.estimate);
        }
        mse_checks(rep, "cascaded " + label, casc, err_cov.trace().real(), var_n * h1_col.squaredNorm(), opts);
    }
    return rep;
}

SuiteReport gradient_suite(const GradientSuiteOptions &opts)
{
    if (opts.points < 1 || opts.k < 1 || opts.m < 1 || opts.n < 1)
        throw ConfigError("gradient_suite: sizes must be positive.");
    SuiteReport rep{"gradient", {}};
    const double p_t = 5.0, sigma2 = 1.0;

    for (int pt = 0; pt < opts.points; ++pt)
    {
        Rng rng = make_stream(opts.seed, static_cast<std::uint64_t>(pt), 0);
        LinkChannels ch;
        for (int k = 0; k < opts.k; ++k)
        {
            ch.hd.push_back(0.3 * complex_normal(opts.m, rng));
            cmat h0(opts.m, opts.n);
            for (int j = 0; j < opts.n; ++j)
                h0.col(j) = 0.3 * complex_normal(opts.m, rng);
            ch.h0.push_back(h0);
        }
        PrecoderSolution sol;
        std::uniform_real_distribution<double> u(0.2, 1.0);
        double total = 0.0;
        for (int k = 0; k < opts.k; ++k)
        {
            sol.g.push_back(complex_normal(opts.m, rng).normalized());
            sol.p.push_back(u(rng));
            total += sol.p.back();
        }
        for (double &p : sol.p)
            p *= p_t / total;
        cvec v = complex_normal(opts.n, rng);
        project_unit_modulus(v, rng);

        // d f / d v_bar; the real gradient is (2 Re, 2 Im).
        const cvec analytic = (1.0 + opts.perturbation) * softmin_rate_gradient(ch, v, sol, sigma2, opts.mu);

        Eigen::VectorXd an(2 * opts.n), fd(2 * opts.n);
        const double h = opts.fd_step;
        for (int j = 0; j < opts.n; ++j)
        {
            an(2 * j) = 2.0 * analytic(j).real();
            an(2 * j + 1) = 2.0 * analytic(j).imag();
            for (int part = 0; part < 2; ++part)
            {
                const cplx dir = part == 0 ? cplx(h, 0.0) : cplx(0.0, h);
                cvec vp = v, vm = v;
                vp(j) += dir;
                vm(j) -= dir;
                fd(2 * j + part) = (softmin_rate(ch, vp, sol, sigma2, opts.mu) -
                                    softmin_rate(ch, vm, sol, sigma2, opts.mu)) /
                                   (2.0 * h);
            }
        }
        const double rel = (an - fd).norm() / std::max(fd.norm(), 1e-300);
        rep.checks.push_back(upper("point " + std::to_string(pt) + " relative error", rel, opts.tol));
    }
    return rep;
}

SuiteReport phase_optimality_suite(const PhaseOptimalitySuiteOptions &opts)
{
    if (opts.instances < 1 || opts.levels < 2 || opts.max_m < 1 || opts.max_n < 1)
        throw ConfigError("phase_optimality_suite: sizes must be positive.");
    SuiteReport rep{"phase-optimality", {}};
    const double pi = std::numbers::pi;
    const double quant = 1.0 - std::cos(pi / opts.levels);

    std::vector<cplx> grid(static_cast<std::size_t>(opts.levels));
    for (int l = 0; l < opts.levels; ++l)
        grid[static_cast<std::size_t>(l)] = std::polar(1.0, 2.0 * pi * l / opts.levels);

    double worst_excess = -1e300;
    int failures = 0;
    for (int inst = 0; inst < opts.instances; ++inst)
    {
        Rng rng = make_stream(opts.seed, static_cast<std::uint64_t>(inst), 0);
        const int m = std::uniform_int_distribution<int>(1, opts.max_m)(rng);
        const int n = std::uniform_int_distribution<int>(1, opts.max_n)(rng);
        std::uniform_real_distribution<double> ang(-pi / 2, pi / 2);
        const double aod = ang(rng), aoa = ang(rng);
        const cmat h1 = rank_one_h1(m, n, 1.0, aod, aoa);
        const cvec h2 = complex_normal(n, rng);
        const cvec hd = complex_normal(m, rng);
        const cmat h0 = cascade(h1, h2);

        const cvec v_cf = irs_phases_single_user(h0, hd).v;
        const double h_cf = (hd + h0 * v_cf).squaredNorm();
        const double p_cf = opts.p_t * h_cf;

        // Odometer over levels^n phase combinations.
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        double best = 0.0;
        for (;;)
        {
            cvec h = hd;
            for (int j = 0; j < n; ++j)
                h += h0.col(j) * grid[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
            best = std::max(best, opts.p_t * h.squaredNorm());
            int j = 0;
            while (j < n && ++idx[static_cast<std::size_t>(j)] == opts.levels)
                idx[static_cast<std::size_t>(j++)] = 0;
            if (j == n)
                break;
        }
        const double bound = p_cf + 2.0 * p_cf * quant;
        if (!(best <= bound))
            ++failures;
        worst_excess = std::max(worst_excess, (best - p_cf) / p_cf);
    }
    rep.checks.push_back({"instances exceeding grid bound", static_cast<double>(failures), 0.0, "<=", failures == 0});
    rep.checks.push_back(upper("worst (grid - closed form) / closed form", worst_excess, 2.0 * quant, false));
    return rep;
}

SuiteReport irs_scaling_suite(const IrsScalingSuiteOptions &opts)
{
    if (opts.trials < 1 || opts.n_values.empty())
        throw ConfigError("irs_scaling_suite: need trials and N values.");
    SuiteReport rep{"irs-scaling", {}};

    auto mean_snr = [&](int n) {
        ScenarioConfig cfg;
        cfg.n_irs = n;
        const ChannelStatistics stats = make_channel_statistics(cfg);
        const cmat h1 = rank_one_h1(cfg, bs_to_irs_aod(cfg), bs_to_irs_aoa(cfg));
        double acc = 0.0;
        for (int t = 0; t < opts.trials; ++t)
        {
            Rng rng = make_stream(opts.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(n));
            ChannelSet cs = draw_channel_set(h1, stats, rng);
            const cvec v = irs_phases_aligned(cs.h0[0]).v;
            acc += cfg.total_power_w * (cs.h0[0] * v).squaredNorm() / cfg.noise_power_w;
        }
        return acc / opts.trials;
    };

    for (int n : opts.n_values)
    {
        const double gain = linear_to_db(mean_snr(2 * n) / mean_snr(n));
        const double dev = std::abs(gain - opts.expected_db);
        rep.checks.push_back({"N=" + std::to_string(n) + "->" + std::to_string(2 * n) + " gain dB", gain,
                              opts.tol_db, "|x-" + fmt("%.2f", opts.expected_db) + "|<=", dev <= opts.tol_db});
    }
    return rep;
}

SuiteReport snr_doubling_suite(const SnrDoublingSuiteOptions &opts)
{
    SuiteReport rep{"snr-doubling", {}};
    SweepRequest req;
    req.kind = SweepKind::UserDistance;
    req.grid = {opts.du};
    req.trials = opts.trials;
    req.seed = opts.seed;
    req.threads = opts.threads;
    req.base.n_irs = opts.n;
    const double snr_n = run_sweep(req).front().sinr[0];
    req.base.n_irs = 2 * opts.n;
    const double snr_2n = run_sweep(req).front().sinr[0];
    const double gain = linear_to_db(snr_2n / snr_n);
    rep.checks.push_back({"du=" + fmt("%g", opts.du) + " N=" + std::to_string(opts.n) + "->" +
                              std::to_string(2 * opts.n) + " gain dB",
                          gain, opts.tol_db, "|x-" + fmt("%.2f", opts.expected_db) + "|<=",
                          std::abs(gain - opts.expected_db) <= opts.tol_db});
    return rep;
}

} // namespace irsim
