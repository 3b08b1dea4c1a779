#pragma once

#include <cmath>
#include <sstream>

#include "risfso/error.hpp"

namespace risfso::metrics
{
template<class F>
double solve_mean_snr_db(F&& metric, double target, double lo_db, double hi_db, double tol_db)
{
    // Work on log10 of the metric: probabilities span many decades.
    auto const g = [&](double db) { return std::log10(metric(db)) - std::log10(target); };
    double glo = g(lo_db);
    double const ghi = g(hi_db);
    if (!(glo > 0.0 && ghi <= 0.0))
    {
        std::ostringstream msg;
        msg << "solve_mean_snr_db: target " << target << " not bracketed by [" << lo_db
            << ", " << hi_db << "] dB";
        throw NumericalError(msg.str());
    }
    double lo = lo_db;
    double hi = hi_db;
    while (hi - lo > tol_db)
    {
        double const mid = 0.5 * (lo + hi);
        double const gm = g(mid);
        if (gm > 0.0)
        {
            lo = mid;
            glo = gm;
        }
        else
        {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace risfso::metrics
