#include "hypoflow/phi.hpp"

#include <cmath>

namespace hypoflow {

double phi_eval(const PhiFamily& fam, double s, int order) {
    if (s < 0.0) throw std::domain_error("phi_eval: s must be nonnegative");
    if (order < 0 || order > 2) throw std::invalid_argument("phi_eval: order must be 0, 1 or 2");

    const double p = fam.p;
    if (fam.is_log_branch()) {
        switch (order) {
            case 0:
                if (s == 0.0) return 1.0;  // limit of s log s - (s-1) at 0+
                return s * std::log(s) - (s - 1.0);
            case 1:
                if (s == 0.0) throw std::domain_error("phi_eval: phi' singular at s=0");
                return std::log(s);
            default:
                if (s == 0.0) throw std::domain_error("phi_eval: phi'' singular at s=0");
                return 1.0 / s;
        }
    }

    switch (order) {
        case 0:
            return (std::pow(s, p) - 1.0 - p * (s - 1.0)) / (p - 1.0);
        case 1:
            if (s == 0.0 && p < 2.0)
                throw std::domain_error("phi_eval: phi' singular at s=0 for p<2");
            return p * (std::pow(s, p - 1.0) - 1.0) / (p - 1.0);
        default:
            if (s == 0.0 && p < 2.0)
                throw std::domain_error("phi_eval: phi'' singular at s=0 for p<2");
            return p * std::pow(s, p - 2.0);
    }
}

}  // namespace hypoflow
