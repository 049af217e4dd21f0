#pragma once

#include <stdexcept>

namespace lbc {

/// Black--Scholes model and domain parameters.
struct ModelParams {
    double r;      ///< risk-neutral interest rate, r > 0
    double sigma;  ///< volatility, sigma >= 0
    double S;      ///< truncated domain cap
    double E;      ///< strike, 0 < E < S
    double T;      ///< maturity

    void validate() const {
        if (!(r > 0.0)) throw std::invalid_argument("ModelParams: r must be positive");
        if (!(sigma >= 0.0)) throw std::invalid_argument("ModelParams: sigma must be nonnegative");
        if (!(T > 0.0)) throw std::invalid_argument("ModelParams: T must be positive");
        if (!(E > 0.0 && E < S)) throw std::invalid_argument("ModelParams: need 0 < E < S");
    }
};

}  // namespace lbc
