#pragma once

#include <string>

#include "htensor/io.hpp"
#include "htensor/spectra.hpp"

namespace htensor {

/// Plain-text evidence table for a rank estimate. The CLI prints this and the
/// golden files freeze it, so the bytes are deterministic for a given run.
inline std::string format_rank_evidence(const RankEstimate& est) {
    std::string out;
    out += "# rank-estimate evidence\n";
    out += "# seed " + std::to_string(est.seed) + " restarts " + std::to_string(est.restarts) +
           " iters " + std::to_string(est.iters) + " fit-tol " + detail::format_double(est.fit_tol) + "\n";
    out += "# matricization-lower-bound " + std::to_string(est.lower_bound) + "\n";
    out += "# best-rank " + (est.best_rank > 0 ? std::to_string(est.best_rank) : std::string("none")) + "\n";
    out += "R\tbest_fit\tbest_restart\treached_tol\n";
    for (const RankEvidenceRow& row : est.rows)
        out += std::to_string(row.rank) + "\t" + detail::format_double(row.best_fit) + "\t" +
               std::to_string(row.best_restart) + "\t" + (row.reached_tol ? "yes" : "no") + "\n";
    return out;
}

}  // namespace htensor
