#pragma once

#include "esgmv/estimators.hpp"

namespace esgmv {

/// True (or calibrated) parameters of returns and ESG scores.
struct PopulationModel {
    MomentModel returns;
    EsgMoments esg;

    Index assets() const noexcept { return returns.mu.size(); }

    /// Throws Parameter when dimensions disagree.
    void validate() const;
};

}  // namespace esgmv
