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

#pragma once

#include <cstddef>
#include <vector>

#include <armadillo>

namespace chanlqs
{

/// Bank of separable multitaper windows: each 2-D window is the outer product
/// u_a[m] * v_b[q] of one time and one frequency Slepian sequence. All
/// sequences have unit energy; same-axis sequences are mutually orthogonal.
struct dpss_bank
{
    arma::mat time_windows; // N_wt x I, column a = u_a
    arma::mat freq_windows; // N_wf x J, column b = v_b
    double time_halfbandwidth = 0.0;
    std::vector<double> weights; // length I*J, uniform 1/(I*J)

    std::size_t window_count() const
    {
        return time_windows.n_cols * freq_windows.n_cols;
    }
};

/// First `count` discrete prolate spheroidal sequences of the given length and
/// half-bandwidth W = nw/length, computed from the classical symmetric
/// tridiagonal formulation. Unit energy, most concentrated first, sign fixed
/// so the maximal-magnitude entry is positive.
arma::mat slepian_sequences(std::size_t length, double nw, std::size_t count);

/// Builds the separable window bank. Requires I <= 2*nw-1 and J <= 2*nw-1
/// (only well-concentrated sequences) and lengths >= 4.
dpss_bank make_dpss_bank(std::size_t n_wt, std::size_t n_wf, double nw,
                         std::size_t windows_time, std::size_t windows_freq);

} // namespace chanlqs
