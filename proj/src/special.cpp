// Copyright 2026 The Macrofacet Authors
// SPDX-License-Identifier: Apache-2.0

#include <macrofacet/special.hpp>

#include <macrofacet/error.hpp>
#include <macrofacet/vec.hpp>

#include <array>
#include <cmath>
#include <string>

namespace macrofacet {

namespace {

// Coefficients of the three rational approximations in Cody's CALERF.
constexpr std::array<double, 5> kA = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                                      3209.37758913846947, .185777706184603153};
constexpr std::array<double, 4> kB = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                                      2844.23683343917062};
constexpr std::array<double, 9> kC = {.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                                      298.635138197400131, 881.95222124176909,  1712.04761263407058,
                                      2051.07837782607147, 1230.33935479799725, 2.15311535474403846e-8};
constexpr std::array<double, 8> kD = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                                      1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                                      3439.36767414372164, 1230.33935480374942};
constexpr std::array<double, 6> kP = {.305326634961232344, .360344899949804439, .125781726111229246,
                                      .0160837851487422766, 6.58749161529837803e-4, .0163153871373020978};
constexpr std::array<double, 5> kQ = {2.56852019228982242, 1.87295284992346047, .527905102951428412,
                                      .0605183413124413191, .00233520497626869185};

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kThresh = 0.46875;
constexpr double kXSmall = 1.11e-16;
constexpr double kXBig = 26.543;
constexpr double kXHuge = 6.71e7;
constexpr double kXMax = 2.53e307;
constexpr double kXNeg = -26.628;

enum class Variant { Erf, Erfc, Erfcx };

// exp(-y^2) split so that the rounding of y*y does not leak into the tail.
double exp_neg_square(double y) {
    const double ysq = std::trunc(y * 16.0) / 16.0;
    const double del = (y - ysq) * (y + ysq);
    return std::exp(-ysq * ysq) * std::exp(-del);
}

double calerf(double x, Variant variant) {
    const double y = std::fabs(x);
    double result = 0.0;

    if (y <= kThresh) {
        const double ysq = y > kXSmall ? y * y : 0.0;
        double xnum = kA[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + kA[i]) * ysq;
            xden = (xden + kB[i]) * ysq;
        }
        result = x * (xnum + kA[3]) / (xden + kB[3]);
        if (variant != Variant::Erf)
            result = 1.0 - result;
        if (variant == Variant::Erfcx)
            result *= std::exp(ysq);
        return result;
    }

    if (y <= 4.0) {
        double xnum = kC[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + kC[i]) * y;
            xden = (xden + kD[i]) * y;
        }
        result = (xnum + kC[7]) / (xden + kD[7]);
        if (variant != Variant::Erfcx)
            result *= exp_neg_square(y);
    } else {
        bool done = false;
        if (y >= kXBig) {
            if (variant != Variant::Erfcx || y >= kXMax) {
                result = 0.0;
                done = true;
            } else if (y >= kXHuge) {
                result = kInvSqrtPi / y;
                done = true;
            }
        }
        if (!done) {
            const double ysq = 1.0 / (y * y);
            double xnum = kP[5] * ysq;
            double xden = ysq;
            for (int i = 0; i < 4; ++i) {
                xnum = (xnum + kP[i]) * ysq;
                xden = (xden + kQ[i]) * ysq;
            }
            result = ysq * (xnum + kP[4]) / (xden + kQ[4]);
            result = (kInvSqrtPi - result) / y;
            if (variant != Variant::Erfcx)
                result *= exp_neg_square(y);
        }
    }

    switch (variant) {
        case Variant::Erf:
            result = (0.5 - result) + 0.5;
            return x < 0 ? -result : result;
        case Variant::Erfc:
            return x < 0 ? 2.0 - result : result;
        case Variant::Erfcx:
            if (x < 0) {
                if (x < kXNeg)
                    return std::numeric_limits<double>::max();
                const double ysq = std::trunc(x * 16.0) / 16.0;
                const double del = (x - ysq) * (x + ysq);
                const double e = std::exp(ysq * ysq) * std::exp(del);
                return e + e - result;
            }
            return result;
    }
    return result;
}

void require_positive_variance(double var, const char* what) {
    if (!(var > 0.0) || !std::isfinite(var))
        throw ParameterDomainError(std::string(what) + ": variance must be positive, got " + std::to_string(var));
}

}  // namespace

double erf(double x) { return calerf(x, Variant::Erf); }
double erfc(double x) { return calerf(x, Variant::Erfc); }
double erfcx(double x) { return calerf(x, Variant::Erfcx); }

double gauss_pdf(double x, double mu, double var) {
    require_positive_variance(var, "gauss_pdf");
    const double d = x - mu;
    return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
}

double gauss_cdf(double x, double mu, double var) {
    require_positive_variance(var, "gauss_cdf");
    return 0.5 * erfc(-(x - mu) / std::sqrt(2.0 * var));
}

double log_gauss_cdf(double x, double mu, double var) {
    require_positive_variance(var, "log_gauss_cdf");
    const double u = (x - mu) / std::sqrt(2.0 * var);
    if (u < 0.0)
        return std::log(0.5 * erfcx(-u)) - u * u;
    return std::log1p(-0.5 * erfc(u));
}

double standard_mills_inverse(double x) {
    constexpr double kSqrt2OverPi = 0.79788456080286535588;
    if (x < 0.0)
        return kSqrt2OverPi / erfcx(-x / kSqrt2);
    const double pdf = std::exp(-0.5 * x * x) * (kSqrt2OverPi * 0.5);
    return pdf / (1.0 - 0.5 * erfc(x / kSqrt2));
}

}  // namespace macrofacet
