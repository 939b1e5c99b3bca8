// SPDX-License-Identifier: Apache-2.0
//
// oosi - decentralized out-of-system interference suppression for
// cell-free massive MIMO
// Copyright (C) 2026 The oosi authors
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

#ifndef OOSI_SCENARIO_HPP
#define OOSI_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "oosi/numerics.hpp"

namespace oosi
{

using Rng = std::mt19937_64;

// Independent, reproducible stream for (seed, block, purpose).
Rng make_stream(std::uint64_t seed, std::uint64_t block, std::uint64_t purpose);

// Matrix of i.i.d. CN(0, variance) entries.
CMatrix complex_gaussian(Index rows, Index cols, double variance, Rng &rng);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/**
 * Scalar parameters of one network + coherence-block setup.
 *
 * Noise power is fixed to 1, so `rho` and `oos_snr` are SNRs. Both are
 * normalized: large-scale gains are divided by the reference gain (see
 * `gain_reference_db`) before they scale channel draws.
 */
struct SystemConfig
{
    int num_aps = 4;          // L
    int antennas_per_ap = 4;  // N
    int num_ues = 5;          // K
    int num_oos = 2;          // K_I
    int pilot_length = 50;    // tau_p
    int coherence_length = 200; // tau_c
    double rho = 1.0;         // UE transmit SNR (linear)
    double oos_snr = 0.5011872336272722; // -3 dB
    double alpha = 1e6;       // sequential LS prior scale
    std::vector<int> ap_order; // 0-based visiting order; empty = L-1, ..., 0
    std::uint64_t seed = 1;
    double area_side_m = 500.0;
    double ue_margin_m = 10.0;
    double ap_height_m = 5.0;
    int trials = 134;
    // Path loss [dB] that maps to 0 dB normalized gain. When unset, the path
    // loss from the area centre to the nearest AP is used.
    std::optional<double> gain_reference_db;

    // Throws InputError on any violated invariant.
    void validate() const;

    // ap_order, or the reversed default when empty.
    std::vector<int> chain_order() const;

    int complement_dim() const { return pilot_length - num_ues; }
    int augmented_dim() const { return num_ues + num_oos; }
};

struct Point3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Point3 &a, const Point3 &b);

// -30.5 - 36.7 log10(d / 1 m)
double pathloss_db(double distance_m);

struct Geometry
{
    std::vector<Point3> aps;
    std::vector<Point3> ues;
    std::vector<Point3> oos;
    RMatrix beta_ue;  // L x K, linear, un-normalized
    RMatrix beta_oos; // L x K_I, linear, un-normalized
    double reference_gain = 1.0; // linear gain that counts as 0 dB
};

// AP positions at arc lengths (i + 1/2) P / L along the square perimeter
// (counter-clockwise from the origin corner), at height ap_height_m.
std::vector<Point3> perimeter_ap_positions(const SystemConfig &cfg);

double default_gain_reference_db(const SystemConfig &cfg);

Geometry build_geometry(const SystemConfig &cfg, Rng &rng);

// Unit-norm orthogonal pilots and an orthonormal basis of their complement.
struct PilotBook
{
    CMatrix phi; // tau_p x K
    CMatrix psi; // tau_p x (tau_p - K)
};

PilotBook build_pilot_book(int pilot_length, int num_ues, int num_oos = 0);
PilotBook build_pilot_book(const SystemConfig &cfg);

struct BlockRealization
{
    std::vector<CMatrix> H;           // per AP, N x K
    std::vector<CMatrix> G;           // per AP, N x K_I
    CMatrix S;                        // tau_p x K_I
    std::vector<CMatrix> pilot_noise; // per AP, N x tau_p
};

BlockRealization draw_block(const SystemConfig &cfg, const Geometry &geo, Rng &rng);

} // namespace oosi

#endif
