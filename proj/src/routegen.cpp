#include "ecodrive/routegen.hpp"

#include <cmath>
#include <random>

#include "ecodrive/errors.hpp"

namespace ecodrive {

namespace {

constexpr double kGrid = 25.0;

// Inclusive integer draw from raw engine output; modulo bias is
// irrelevant for route shapes and keeps results independent of the
// standard library's distribution internals.
int pick(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct Builder {
    RouteProfile route;
    double s = 0;

    void mark(double grade, double vmin, double vmax) {
        route.points.push_back({s, grade, vmin, vmax});
    }
    void advance(double len) { s += len; }
};

void add_hills(Builder& b, std::mt19937_64& rng, double until, double vmax) {
    b.advance(500); // lead-in on the initial segment
    for (;;) {
        const double up = kGrid * pick(rng, 12, 28);
        const double crest = kGrid * pick(rng, 6, 14);
        const double down = kGrid * pick(rng, 12, 28);
        const double valley = kGrid * pick(rng, 8, 20);
        if (b.s + up + crest + down + valley + 500 > until) return;
        const double g_up = 0.005 * pick(rng, 3, 8);
        const double g_down = -0.005 * pick(rng, 3, 8);
        b.mark(g_up, 0, vmax);
        b.advance(up);
        b.mark(0, 0, vmax);
        b.advance(crest);
        b.mark(g_down, 0, vmax);
        b.advance(down);
        b.mark(0, 0, vmax);
        b.advance(valley);
    }
}

void add_zone(Builder& b, double start, double len, double vmax_zone,
              double vmax) {
    b.s = start;
    b.mark(0, 0, vmax_zone);
    b.advance(len);
    b.mark(0, 0, vmax);
}

} // namespace

RouteProfile make_route(const std::string& kind, double length_m,
                        std::uint64_t seed, double vmax_mps) {
    if (std::fmod(length_m, kGrid) != 0)
        throw ValidationError("route length must be a multiple of 25 m");
    const double min_len = kind == "flat" || kind == "hill" ? 1000 : 3000;
    if (length_m < min_len)
        throw ValidationError("kind '" + kind + "' needs at least " +
                              std::to_string(static_cast<int>(min_len)) +
                              " m");

    std::mt19937_64 rng(seed);
    Builder b;
    b.route.name = kind;
    b.mark(0, 0, vmax_mps);

    const double reduced = 70.0 / 3.6;
    // Crawl zones sit above the modeling floor so the corridor keeps width;
    // a limit equal to the floor would demand one exact speed, which the
    // mode lattice cannot hit.
    const double crawl = 15.0 / 3.6;
    if (kind == "flat") {
        // nothing between start and end
    } else if (kind == "hill") {
        add_hills(b, rng, length_m, vmax_mps);
    } else if (kind == "stops") {
        const auto frac = [&](double lo, double hi) {
            const int cells = static_cast<int>(length_m / kGrid);
            return kGrid * pick(rng, static_cast<int>(lo * cells),
                                static_cast<int>(hi * cells));
        };
        add_zone(b, frac(0.30, 0.40), 100, crawl, vmax_mps);
        add_zone(b, frac(0.50, 0.58), 500, reduced, vmax_mps);
        add_zone(b, frac(0.72, 0.82), 100, crawl, vmax_mps);
    } else if (kind == "mixed") {
        add_hills(b, rng, 0.55 * length_m, vmax_mps);
        const int cells = static_cast<int>(length_m / kGrid);
        const double crawl_at =
            kGrid * pick(rng, static_cast<int>(0.62 * cells),
                         static_cast<int>(0.68 * cells));
        add_zone(b, crawl_at, 100, crawl, vmax_mps);
        const double slow_at =
            kGrid * pick(rng, static_cast<int>(0.78 * cells),
                         static_cast<int>(0.84 * cells));
        add_zone(b, slow_at, 750, reduced, vmax_mps);
    } else {
        throw ValidationError("unknown route kind '" + kind +
                              "' (flat|hill|stops|mixed)");
    }

    b.s = length_m;
    b.mark(0, 0, vmax_mps);
    b.route.validate();
    return b.route;
}

} // namespace ecodrive
