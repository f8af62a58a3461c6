// SPDX-License-Identifier: Apache-2.0
//
// chanlqs - non-stationarity analysis of MIMO radio channels
// Copyright (C) 2026 the chanlqs authors
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

#include "chanlqs/measures.hpp"

#include <cmath>
#include <numbers>

#include "chanlqs/errors.hpp"

namespace chanlqs
{

namespace
{

double clip_unit(double v)
{
    if (v > 1.0 + 1e-9)
        throw numerical_error("measure exceeds 1 beyond rounding");
    return std::min(1.0, std::max(0.0, v));
}

// Eigendecomposition with the PSD rounding contract: eigenvalues in
// [-1e-10*trace, 0) are clipped to zero, anything more negative is an error.
void eig_psd(const arma::cx_mat &r, arma::vec &evals, arma::cx_mat &evecs)
{
    if (!arma::eig_sym(evals, evecs, r))
        throw numerical_error("eig_psd: eigendecomposition failed");
    const double tr = arma::sum(evals);
    const double floor_tol = 1e-10 * std::abs(tr);
    for (arma::uword i = 0; i < evals.n_elem; ++i)
    {
        if (evals(i) < -floor_tol)
            throw numerical_error("eig_psd: matrix is not PSD up to rounding");
        if (evals(i) < 0.0)
            evals(i) = 0.0;
    }
}

// Rotates the vector so its maximal-magnitude component is real positive.
arma::cx_vec phase_normalize(const arma::cx_vec &u)
{
    arma::uword imax = 0;
    for (arma::uword i = 1; i < u.n_elem; ++i)
        if (std::abs(u(i)) > std::abs(u(imax)))
            imax = i;
    const double mag = std::abs(u(imax));
    if (mag == 0.0)
        return u;
    return u * (std::conj(u(imax)) / mag);
}

bool lex_less_rounded(const arma::cx_vec &a, const arma::cx_vec &b)
{
    auto round12 = [](double x) { return std::round(x * 1e12) / 1e12; };
    for (arma::uword i = 0; i < a.n_elem; ++i)
    {
        const double ar = round12(a(i).real()), br = round12(b(i).real());
        if (ar != br)
            return ar < br;
        const double ai = round12(a(i).imag()), bi = round12(b(i).imag());
        if (ai != bi)
            return ai < bi;
    }
    return false;
}

arma::cx_vec dominant_eigvec(const arma::cx_mat &r)
{
    arma::vec evals;
    arma::cx_mat evecs;
    eig_psd(r, evals, evecs);
    const arma::uword n = evals.n_elem;
    const double lmax = evals(n - 1); // eig_sym sorts ascending
    const double tie_tol = 1e-12 * std::max(1.0, lmax);

    arma::cx_vec best;
    for (arma::uword i = n; i-- > 0;)
    {
        if (evals(i) < lmax - tie_tol)
            break;
        arma::cx_vec cand = phase_normalize(evecs.col(i));
        if (best.is_empty() || lex_less_rounded(cand, best))
            best = cand;
    }
    return best;
}

} // namespace

void estimator_config::validate() const
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw config_error("estimator config: gamma must be finite and > 0");
    if (pilot_spacing < 1 || interval_length < 1)
        throw config_error("estimator config: L and N must be >= 1");
}

const char *measure_kind_name(measure_kind kind)
{
    switch (kind)
    {
    case measure_kind::col_doppler:
        return "col_doppler";
    case measure_kind::col_delay:
        return "col_delay";
    case measure_kind::cmd_tx:
        return "cmd_tx";
    case measure_kind::cmd_rx:
        return "cmd_rx";
    case measure_kind::cmd_full:
        return "cmd_full";
    case measure_kind::snr_tx:
        return "snr_tx";
    case measure_kind::snr_rx:
        return "snr_rx";
    case measure_kind::mse_doppler_exact:
        return "mse_doppler_exact";
    case measure_kind::mse_doppler_ap:
        return "mse_doppler_ap";
    case measure_kind::mse_delay_exact:
        return "mse_delay_exact";
    case measure_kind::mse_delay_ap:
        return "mse_delay_ap";
    }
    return "unknown";
}

measure_kind measure_kind_from_name(const std::string &name)
{
    static const measure_kind all[] = {
        measure_kind::col_doppler,      measure_kind::col_delay,
        measure_kind::cmd_tx,           measure_kind::cmd_rx,
        measure_kind::cmd_full,         measure_kind::snr_tx,
        measure_kind::snr_rx,           measure_kind::mse_doppler_exact,
        measure_kind::mse_doppler_ap,   measure_kind::mse_delay_exact,
        measure_kind::mse_delay_ap};
    for (measure_kind k : all)
        if (name == measure_kind_name(k))
            return k;
    throw config_error("unknown measure kind: " + name);
}

corr_matrix_track estimate_corr_track(const channel_tensor &t, corr_side side,
                                      std::size_t n_t, std::size_t n_f)
{
    if (n_t < 1 || n_f < 1)
        throw config_error("estimate_corr_track: averaging lengths must be >= 1");
    if (n_t > t.grid.n_time || n_f > t.grid.n_freq)
        throw insufficient_data("estimate_corr_track: averaging window exceeds the tensor");

    const std::size_t n_bins = t.grid.n_time / n_t;
    const std::size_t dim = (side == corr_side::tx)   ? t.n_tx
                            : (side == corr_side::rx) ? t.n_rx
                                                      : t.n_rx * t.n_tx;

    corr_matrix_track track;
    track.side = side;
    track.avg_time = n_t;
    track.avg_freq = n_f;
    track.matrices.reserve(n_bins);

    arma::cx_mat h(t.n_rx, t.n_tx);
    for (std::size_t b = 0; b < n_bins; ++b)
    {
        arma::cx_mat r(dim, dim, arma::fill::zeros);
        for (std::size_t m = b * n_t; m < (b + 1) * n_t; ++m)
        {
            for (std::size_t q = 0; q < n_f; ++q)
            {
                for (std::size_t k = 0; k < t.n_rx; ++k)
                    for (std::size_t l = 0; l < t.n_tx; ++l)
                        h(k, l) = t.at(m, q, k, l);
                switch (side)
                {
                case corr_side::tx:
                    r += arma::strans(h) * arma::conj(h);
                    break;
                case corr_side::rx:
                    r += h * h.t();
                    break;
                case corr_side::full:
                {
                    const arma::cx_vec v = arma::vectorise(h);
                    r += v * v.t();
                    break;
                }
                }
            }
        }
        r /= static_cast<double>(n_t * n_f);
        track.matrices.push_back(0.5 * (r + r.t()));
    }
    return track;
}

double collinearity_psd(const arma::vec &a, const arma::vec &b)
{
    if (a.n_elem != b.n_elem || a.n_elem == 0)
        throw config_error("collinearity_psd: PSD length mismatch");
    const double na = arma::norm(a);
    const double nb = arma::norm(b);
    if (na == 0.0 || nb == 0.0)
        throw undefined_measure("collinearity_psd: all-zero PSD");
    return clip_unit(arma::dot(a, b) / (na * nb));
}

double cmd(const arma::cx_mat &r_a, const arma::cx_mat &r_b)
{
    if (r_a.n_rows != r_a.n_cols || arma::size(r_a) != arma::size(r_b))
        throw config_error("cmd: matrices must be square and equal-sized");
    const double fa = arma::norm(r_a, "fro");
    const double fb = arma::norm(r_b, "fro");
    if (fa == 0.0 || fb == 0.0)
        throw undefined_measure("cmd: zero matrix");
    const double ip = std::real(arma::trace(r_a * r_b));
    return clip_unit(ip / (fa * fb));
}

double relative_snr(const arma::cx_mat &r_a, const arma::cx_mat &r_b_stale)
{
    if (r_a.n_rows != r_a.n_cols || arma::size(r_a) != arma::size(r_b_stale))
        throw config_error("relative_snr: matrices must be square and equal-sized");
    if (arma::norm(r_a, "fro") == 0.0)
        throw undefined_measure("relative_snr: zero current statistic");

    arma::vec evals_a;
    arma::cx_mat evecs_a;
    eig_psd(r_a, evals_a, evecs_a);
    const double lmax = evals_a(evals_a.n_elem - 1);
    if (lmax <= 0.0)
        throw undefined_measure("relative_snr: current statistic has no positive eigenvalue");

    const arma::cx_vec u = dominant_eigvec(r_b_stale);
    const double num = std::real(arma::cdot(u, r_a * u));
    return clip_unit(num / lmax);
}

double approx_relative_mse(const arma::vec &psd_true, const arma::vec &psd_stale,
                           const estimator_config &cfg, double rate)
{
    cfg.validate();
    if (psd_true.n_elem != psd_stale.n_elem || psd_true.n_elem == 0)
        throw config_error("approx_relative_mse: PSD length mismatch");
    if (!(rate > 0.0))
        throw config_error("approx_relative_mse: rate must be > 0");
    if (arma::norm(psd_true, 1) == 0.0)
        throw undefined_measure("approx_relative_mse: all-zero true PSD");

    const double gi = 1.0 / cfg.gamma;
    auto term = [&](double c_true, double c_stale) {
        const double den = rate * c_stale + gi;
        return (gi * gi * rate * c_true + gi * rate * rate * c_stale * c_stale) / (den * den);
    };

    double matched = 0.0, mismatched = 0.0;
    for (arma::uword p = 0; p < psd_true.n_elem; ++p)
    {
        matched += term(psd_true(p), psd_true(p));
        mismatched += term(psd_true(p), psd_stale(p));
    }
    matched /= static_cast<double>(psd_true.n_elem);
    mismatched /= static_cast<double>(psd_true.n_elem);
    return clip_unit(matched / mismatched);
}

namespace
{

// Autocovariance of the process whose binned PSD is given, at integer lag.
// Each bin is treated as a flat spectral density of width rate/n_bins, which
// gives the sinc factor; a flat binned PSD then maps to an exactly white
// sequence instead of a periodic one.
arma::cx_vec psd_autocovariance(const arma::vec &psd, double rate, std::size_t max_lag)
{
    const std::size_t nb = psd.n_elem;
    const double two_pi = 2.0 * std::numbers::pi;
    arma::cx_vec r(max_lag + 1, arma::fill::zeros);
    for (std::size_t lag = 0; lag <= max_lag; ++lag)
    {
        cxd acc(0.0, 0.0);
        for (std::size_t k = 0; k < nb; ++k)
            acc += psd(k) * std::polar(1.0, two_pi * static_cast<double>(k) *
                                                static_cast<double>(lag) /
                                                static_cast<double>(nb));
        const double x = std::numbers::pi * static_cast<double>(lag) / static_cast<double>(nb);
        const double sinc = (lag == 0) ? 1.0 : std::sin(x) / x;
        r(lag) = acc * (rate / static_cast<double>(nb)) * sinc;
    }
    return r;
}

arma::cx_mat toeplitz_from_lags(const arma::cx_vec &r, const std::vector<long long> &pos)
{
    const std::size_t n = pos.size();
    arma::cx_mat out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            const long long lag = pos[i] - pos[j];
            out(i, j) = (lag >= 0) ? r(static_cast<arma::uword>(lag))
                                   : std::conj(r(static_cast<arma::uword>(-lag)));
        }
    return out;
}

// Pilot-to-target covariance E{y_i h*[target]} = r(pos_i - target).
arma::cx_vec cross_from_lags(const arma::cx_vec &r, const std::vector<long long> &pos,
                             long long target)
{
    arma::cx_vec out(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i)
    {
        const long long lag = pos[i] - target;
        out(i) = (lag >= 0) ? r(static_cast<arma::uword>(lag))
                            : std::conj(r(static_cast<arma::uword>(-lag)));
    }
    return out;
}

} // namespace

mse_model make_mse_model(const arma::vec &psd, const estimator_config &cfg, double rate)
{
    cfg.validate();
    if (psd.n_elem == 0)
        throw config_error("make_mse_model: empty PSD");
    if (!(rate > 0.0))
        throw config_error("make_mse_model: rate must be > 0");

    const std::size_t n = cfg.interval_length;
    const long long spacing = static_cast<long long>(cfg.pilot_spacing);
    std::vector<long long> pos(n);
    for (std::size_t i = 0; i < n; ++i)
        pos[i] = static_cast<long long>(i) * spacing;
    const long long target = pos[n - 1] / 2; // interval midpoint on the sample grid

    const std::size_t max_lag = static_cast<std::size_t>(pos[n - 1]);
    const arma::cx_vec r = psd_autocovariance(psd, rate, max_lag);
    if (std::abs(r(0).imag()) > 1e-8 * std::max(1.0, std::abs(r(0).real())))
        throw numerical_error("make_mse_model: non-Hermitian covariance drift");

    mse_model model;
    model.variance = r(0).real();
    const double gi = 1.0 / cfg.gamma;
    model.cov_plus_noise = toeplitz_from_lags(r, pos) + gi * arma::eye<arma::cx_mat>(n, n);
    model.cross = cross_from_lags(r, pos, target);
    if (!arma::solve(model.filter, model.cov_plus_noise, model.cross))
        throw numerical_error("make_mse_model: filter solve failed");
    model.matched_mse = model.variance - std::real(arma::cdot(model.filter, model.cross));
    if (model.matched_mse < -1e-10 * std::max(1.0, model.variance))
        throw numerical_error("make_mse_model: negative matched MSE");
    model.matched_mse = std::max(0.0, model.matched_mse);
    return model;
}

double mismatched_mse(const mse_model &truth, const mse_model &stale)
{
    if (stale.filter.n_elem != truth.filter.n_elem)
        throw config_error("mismatched_mse: interval length mismatch");
    const arma::cx_vec &w = stale.filter;
    const double mse = truth.variance - 2.0 * std::real(arma::cdot(w, truth.cross)) +
                       std::real(arma::cdot(w, truth.cov_plus_noise * w));
    if (mse <= 0.0)
        throw numerical_error("mismatched_mse: non-positive MSE");
    return mse;
}

double exact_relative_mse(const arma::vec &psd_true, const arma::vec &psd_stale,
                          const estimator_config &cfg, double rate)
{
    if (psd_true.n_elem != psd_stale.n_elem || psd_true.n_elem == 0)
        throw config_error("exact_relative_mse: PSD length mismatch");
    if (arma::norm(psd_true, 1) == 0.0)
        throw undefined_measure("exact_relative_mse: all-zero true PSD");

    const mse_model truth = make_mse_model(psd_true, cfg, rate);
    const mse_model stale = make_mse_model(psd_stale, cfg, rate);
    return clip_unit(truth.matched_mse / mismatched_mse(truth, stale));
}

cmd_decomposition cmd_algorithmic_decomposition(const arma::cx_mat &r_a,
                                                const arma::cx_mat &r_b)
{
    if (r_a.n_rows != r_a.n_cols || arma::size(r_a) != arma::size(r_b))
        throw config_error("cmd decomposition: matrices must be square and equal-sized");
    const double fa = arma::norm(r_a, "fro");
    const double fb = arma::norm(r_b, "fro");
    if (fa == 0.0 || fb == 0.0)
        throw undefined_measure("cmd decomposition: zero matrix");

    arma::vec evals;
    arma::cx_mat evecs;
    eig_psd(r_b, evals, evecs);

    const arma::uword n = evals.n_elem;
    cmd_decomposition out;
    out.terms.set_size(n);
    double acc = 0.0;
    for (arma::uword i = 0; i < n; ++i)
    {
        const arma::uword src = n - 1 - i; // descending eigenvalue order
        const arma::cx_vec u = evecs.col(src);
        out.terms(i) = evals(src) * std::real(arma::cdot(u, r_a * u));
        acc += out.terms(i);
    }
    out.value = clip_unit(acc / (fa * fb));
    return out;
}

} // namespace chanlqs
