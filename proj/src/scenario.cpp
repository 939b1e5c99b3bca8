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

#include "oosi/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "oosi/errors.hpp"

namespace oosi
{

Rng make_stream(std::uint64_t seed, std::uint64_t block, std::uint64_t purpose)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                      static_cast<std::uint32_t>(purpose), 0x6f6f7369u};
    return Rng(seq);
}

CMatrix complex_gaussian(Index rows, Index cols, double variance, Rng &rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
    CMatrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            out(i, j) = cplx(re, im);
        }
    return out;
}

void SystemConfig::validate() const
{
    auto fail = [](const std::string &msg) { throw InputError("SystemConfig: " + msg); };
    if (num_aps < 1)
        fail("num_aps must be positive");
    if (antennas_per_ap < 1)
        fail("antennas_per_ap must be positive");
    if (num_ues < 1)
        fail("num_ues must be positive");
    if (num_oos < 0)
        fail("num_oos must be nonnegative");
    if (pilot_length < num_ues + num_oos)
        fail("pilot_length must be at least num_ues + num_oos");
    if (coherence_length <= pilot_length)
        fail("coherence_length must exceed pilot_length");
    if (!(rho > 0.0) || !std::isfinite(rho))
        fail("rho must be positive");
    if (!(oos_snr > 0.0) || !std::isfinite(oos_snr))
        fail("oos_snr must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        fail("alpha must be positive");
    if (!(area_side_m > 0.0))
        fail("area_side_m must be positive");
    if (!(ue_margin_m >= 0.0) || 2.0 * ue_margin_m >= area_side_m)
        fail("ue_margin_m must leave a nonempty placement region");
    if (!(ap_height_m >= 0.0))
        fail("ap_height_m must be nonnegative");
    if (trials < 1)
        fail("trials must be positive");
    if (gain_reference_db && !std::isfinite(*gain_reference_db))
        fail("gain_reference_db must be finite");
    if (!ap_order.empty())
    {
        if (static_cast<int>(ap_order.size()) != num_aps)
            fail("ap_order must list every AP exactly once");
        std::vector<int> sorted = ap_order;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < num_aps; ++i)
            if (sorted[static_cast<std::size_t>(i)] != i)
                fail("ap_order must be a permutation of the AP indices");
    }
}

std::vector<int> SystemConfig::chain_order() const
{
    if (!ap_order.empty())
        return ap_order;
    std::vector<int> order(static_cast<std::size_t>(num_aps));
    for (int i = 0; i < num_aps; ++i)
        order[static_cast<std::size_t>(i)] = num_aps - 1 - i;
    return order;
}

double distance(const Point3 &a, const Point3 &b)
{
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double pathloss_db(double distance_m)
{
    if (!(distance_m > 0.0))
        throw InputError("pathloss_db: distance must be positive");
    return -30.5 - 36.7 * std::log10(distance_m);
}

std::vector<Point3> perimeter_ap_positions(const SystemConfig &cfg)
{
    if (cfg.num_aps < 1)
        throw InputError("perimeter_ap_positions: need at least one AP");
    if (!(cfg.area_side_m > 0.0))
        throw InputError("perimeter_ap_positions: degenerate area");
    const double a = cfg.area_side_m;
    const double perimeter = 4.0 * a;
    std::vector<Point3> out;
    out.reserve(static_cast<std::size_t>(cfg.num_aps));
    for (int i = 0; i < cfg.num_aps; ++i)
    {
        const double s = (i + 0.5) * perimeter / cfg.num_aps;
        const int side = std::min(3, static_cast<int>(s / a));
        const double t = s - side * a;
        Point3 p{0.0, 0.0, cfg.ap_height_m};
        switch (side)
        {
        case 0: p.x = t; p.y = 0.0; break;
        case 1: p.x = a; p.y = t; break;
        case 2: p.x = a - t; p.y = a; break;
        default: p.x = 0.0; p.y = a - t; break;
        }
        out.push_back(p);
    }
    return out;
}

double default_gain_reference_db(const SystemConfig &cfg)
{
    const Point3 centre{cfg.area_side_m / 2.0, cfg.area_side_m / 2.0, 0.0};
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto &ap : perimeter_ap_positions(cfg))
        nearest = std::min(nearest, distance(centre, ap));
    return pathloss_db(nearest);
}

namespace
{

std::vector<Point3> place_uniform(int count, const SystemConfig &cfg, Rng &rng)
{
    std::uniform_real_distribution<double> coord(cfg.ue_margin_m, cfg.area_side_m - cfg.ue_margin_m);
    std::vector<Point3> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
    {
        const double x = coord(rng);
        const double y = coord(rng);
        out.push_back({x, y, 0.0});
    }
    return out;
}

RMatrix gains(const std::vector<Point3> &aps, const std::vector<Point3> &users)
{
    RMatrix beta(static_cast<Index>(aps.size()), static_cast<Index>(users.size()));
    for (std::size_t l = 0; l < aps.size(); ++l)
        for (std::size_t k = 0; k < users.size(); ++k)
            beta(static_cast<Index>(l), static_cast<Index>(k)) =
                db_to_linear(pathloss_db(distance(aps[l], users[k])));
    return beta;
}

} // namespace

Geometry build_geometry(const SystemConfig &cfg, Rng &rng)
{
    cfg.validate();
    Geometry geo;
    geo.aps = perimeter_ap_positions(cfg);
    geo.ues = place_uniform(cfg.num_ues, cfg, rng);
    geo.oos = place_uniform(cfg.num_oos, cfg, rng);
    geo.beta_ue = gains(geo.aps, geo.ues);
    geo.beta_oos = gains(geo.aps, geo.oos);
    geo.reference_gain = db_to_linear(cfg.gain_reference_db.value_or(default_gain_reference_db(cfg)));
    return geo;
}

PilotBook build_pilot_book(int pilot_length, int num_ues, int num_oos)
{
    if (pilot_length < 1 || num_ues < 0 || num_oos < 0 || pilot_length < num_ues + num_oos)
        throw InputError("build_pilot_book: need pilot_length >= num_ues + num_oos");
    // Columns of the unitary DFT matrix.
    const double norm = 1.0 / std::sqrt(static_cast<double>(pilot_length));
    CMatrix dft(pilot_length, pilot_length);
    for (int m = 0; m < pilot_length; ++m)
        for (int n = 0; n < pilot_length; ++n)
        {
            // Reduce the exponent mod tau_p to keep the angle small and exact.
            const long long e = (static_cast<long long>(m) * n) % pilot_length;
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(e) / pilot_length;
            dft(m, n) = norm * cplx(std::cos(ang), std::sin(ang));
        }
    return PilotBook{dft.leftCols(num_ues), dft.rightCols(pilot_length - num_ues)};
}

PilotBook build_pilot_book(const SystemConfig &cfg)
{
    return build_pilot_book(cfg.pilot_length, cfg.num_ues, cfg.num_oos);
}

BlockRealization draw_block(const SystemConfig &cfg, const Geometry &geo, Rng &rng)
{
    const auto L = static_cast<Index>(cfg.num_aps);
    if (geo.beta_ue.rows() != L || geo.beta_ue.cols() != cfg.num_ues || geo.beta_oos.rows() != L ||
        geo.beta_oos.cols() != cfg.num_oos)
        throw InputError("draw_block: geometry does not match configuration");
    if (!(geo.reference_gain > 0.0))
        throw InputError("draw_block: reference gain must be positive");

    const Index N = cfg.antennas_per_ap;
    BlockRealization block;
    block.H.reserve(static_cast<std::size_t>(L));
    block.G.reserve(static_cast<std::size_t>(L));
    for (Index l = 0; l < L; ++l)
    {
        CMatrix h = complex_gaussian(N, cfg.num_ues, 1.0, rng);
        for (Index k = 0; k < cfg.num_ues; ++k)
            h.col(k) *= std::sqrt(geo.beta_ue(l, k) / geo.reference_gain);
        block.H.push_back(std::move(h));
    }
    for (Index l = 0; l < L; ++l)
    {
        CMatrix g = complex_gaussian(N, cfg.num_oos, 1.0, rng);
        for (Index j = 0; j < cfg.num_oos; ++j)
            g.col(j) *= std::sqrt(geo.beta_oos(l, j) / geo.reference_gain);
        block.G.push_back(std::move(g));
    }
    block.S = complex_gaussian(cfg.pilot_length, cfg.num_oos, cfg.oos_snr, rng);
    block.pilot_noise.reserve(static_cast<std::size_t>(L));
    for (Index l = 0; l < L; ++l)
        block.pilot_noise.push_back(complex_gaussian(N, cfg.pilot_length, 1.0, rng));
    return block;
}

} // namespace oosi
