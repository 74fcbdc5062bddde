#ifndef ECODRIVE_ROUTEGEN_HPP
#define ECODRIVE_ROUTEGEN_HPP

#include <cstdint>
#include <string>

#include "ecodrive/route.hpp"

namespace ecodrive {

/// Synthesize a test route. Kinds:
///   flat  - constant grade zero, one speed limit
///   hill  - rolling hills (up/crest/down/valley cycles)
///   stops - level road with crawl zones and a reduced-limit section
///   mixed - hills plus a crawl zone and a limit change
/// All breakpoints land on a 25 m grid and the same seed always produces
/// the same route (the generator uses raw engine draws, not library
/// distributions).
RouteProfile make_route(const std::string& kind, double length_m,
                        std::uint64_t seed, double vmax_mps = 25.0);

} // namespace ecodrive

#endif
