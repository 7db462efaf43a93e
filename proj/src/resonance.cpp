// Energy surfaces and equal-energy contour geometry

#include "dret/closed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dret {

namespace {

double centre(const SharedMode& mode, std::size_t site) {
    return std::sqrt(2.0) * mode.site_couplings[site] / mode.frequency;
}

ContourPair classify(const MoleculeChain& chain, const SharedMode& mode, const PhaseContour& a,
                     const PhaseContour& b) {
    ContourPair pair;
    pair.first = a.site;
    pair.second = b.site;

    // E_a - E_b = A + B Q independent of P.
    const double w = mode.frequency;
    const double slope = -w * (a.centre_q - b.centre_q);
    const double offset = chain.site_energies[a.site] - chain.site_energies[b.site] +
                          0.5 * w * (a.centre_q * a.centre_q - b.centre_q * b.centre_q);
    const double jab = std::abs(chain.couplings(static_cast<Eigen::Index>(a.site),
                                                static_cast<Eigen::Index>(b.site)));
    if (jab > 0.0) {
        if (slope == 0.0) {
            if (std::abs(offset) < jab) {
                const double inf = std::numeric_limits<double>::infinity();
                pair.near_resonance_band = std::make_pair(-inf, inf);
            }
        } else {
            double lo = (-jab - offset) / slope;
            double hi = (jab - offset) / slope;
            if (lo > hi) std::swap(lo, hi);
            pair.near_resonance_band = std::make_pair(lo, hi);
        }
    }

    if (!a.exists() || !b.exists()) {
        pair.relation = ContourRelation::Missing;
        return pair;
    }
    const double ra = std::sqrt(a.radius_squared);
    const double rb = std::sqrt(b.radius_squared);
    const double d = std::abs(a.centre_q - b.centre_q);
    const double eps = 1e-9 * std::max({1.0, ra, rb, d});

    if (d <= eps) {
        pair.relation = std::abs(ra - rb) <= eps ? ContourRelation::Coincident
                                                 : ContourRelation::Disjoint;
        return pair;
    }
    if (d > ra + rb + eps || d < std::abs(ra - rb) - eps) {
        pair.relation = ContourRelation::Disjoint;
        return pair;
    }
    const double q = (a.radius_squared - b.radius_squared - a.centre_q * a.centre_q +
                      b.centre_q * b.centre_q) /
                     (2.0 * (b.centre_q - a.centre_q));
    const double p2 = a.radius_squared - (q - a.centre_q) * (q - a.centre_q);
    if (std::abs(d - (ra + rb)) <= eps || std::abs(d - std::abs(ra - rb)) <= eps || p2 <= 0.0) {
        pair.relation = ContourRelation::Tangent;
        pair.points.emplace_back(q, 0.0);
        return pair;
    }
    const double p = std::sqrt(p2);
    pair.relation = ContourRelation::Intersecting;
    pair.points.emplace_back(q, p);
    pair.points.emplace_back(q, -p);
    return pair;
}

}  // namespace

const char* to_string(ContourRelation r) noexcept {
    switch (r) {
        case ContourRelation::Intersecting: return "intersecting";
        case ContourRelation::Tangent: return "tangent";
        case ContourRelation::Disjoint: return "disjoint";
        case ContourRelation::Coincident: return "coincident";
        case ContourRelation::Missing: return "missing";
    }
    return "unknown";
}

double energy_surface(const MoleculeChain& chain, const SharedMode& mode, std::size_t site,
                      double q, double p) {
    if (site >= chain.site_count() || site >= mode.site_couplings.size()) {
        throw std::out_of_range("energy_surface: site out of range");
    }
    const double dq = q - centre(mode, site);
    return chain.site_energies[site] + 0.5 * mode.frequency * (p * p + dq * dq);
}

const ContourPair& ResonanceAnalysis::pair_with(std::size_t site) const {
    for (const auto& pr : pairs) {
        if (pr.second == site) return pr;
    }
    throw std::out_of_range("ResonanceAnalysis: no pair with requested site");
}

ResonanceAnalysis resonance_intersections(const MoleculeChain& chain, const SharedMode& mode,
                                          std::size_t occupied_site, std::optional<double> energy) {
    require(validate_chain(chain), "molecule chain");
    require(validate_mode(mode, chain.site_count()), "shared mode");
    if (occupied_site >= chain.site_count()) {
        throw std::out_of_range("resonance_intersections: occupied site out of range");
    }
    ResonanceAnalysis out;
    out.occupied_site = occupied_site;
    out.energy = energy.value_or(energy_surface(chain, mode, occupied_site, 0.0, 0.0));

    const double lowest = *std::min_element(chain.site_energies.begin(), chain.site_energies.end());
    if (out.energy < lowest) {
        throw ValidationError("resonance_intersections: energy below every contour minimum");
    }

    for (std::size_t k = 0; k < chain.site_count(); ++k) {
        out.contours.push_back(PhaseContour{
            k, centre(mode, k),
            2.0 * (out.energy - chain.site_energies[k]) / mode.frequency});
    }
    for (std::size_t k = 0; k < chain.site_count(); ++k) {
        if (k == occupied_site) continue;
        out.pairs.push_back(classify(chain, mode, out.contours[occupied_site], out.contours[k]));
    }
    return out;
}

}  // namespace dret
