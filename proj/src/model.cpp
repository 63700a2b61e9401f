#include "openlz/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace openlz {

LZFamily::LZFamily(double g_) : g(g_) {
    if (!(g > 0.0))
        throw std::invalid_argument("LZFamily: gap parameter g must be > 0");
    if (!std::isfinite(g)) throw std::invalid_argument("LZFamily: g must be finite");
}

// --------------------------------------------------------------------------
// gamma profiles

static void check_profile(double gamma0, double width, bool needs_width) {
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0))
        throw std::invalid_argument("gamma amplitude must be >= 0");
    if (needs_width && (!(width > 0.0) || !std::isfinite(width)))
        throw std::invalid_argument("gamma profile width must be > 0");
}

GammaProfile GammaProfile::constant(double gamma0) {
    check_profile(gamma0, 1.0, false);
    GammaProfile p;
    p.kind = Kind::constant;
    p.amplitude = gamma0;
    return p;
}

GammaProfile GammaProfile::gaussian_bump(double gamma0, double width) {
    check_profile(gamma0, width, true);
    GammaProfile p;
    p.kind = Kind::gaussian_bump;
    p.amplitude = gamma0;
    p.width = width;
    return p;
}

GammaProfile GammaProfile::logistic_step(double gamma0, double width) {
    check_profile(gamma0, width, true);
    GammaProfile p;
    p.kind = Kind::logistic;
    p.amplitude = gamma0;
    p.width = width;
    return p;
}

double GammaProfile::value(double s) const {
    switch (kind) {
        case Kind::constant: return amplitude;
        case Kind::gaussian_bump:
            return amplitude * std::exp(-s * s / (2.0 * width * width));
        case Kind::logistic: return amplitude / (1.0 + std::exp(-s / width));
    }
    return 0.0;
}

double GammaProfile::rate(double s) const {
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::gaussian_bump: return -s / (width * width) * value(s);
        case Kind::logistic: {
            if (amplitude == 0.0) return 0.0;
            const double u = value(s) / amplitude;  // logistic sigma in (0,1)
            return amplitude * u * (1.0 - u) / width;
        }
    }
    return 0.0;
}

double GammaProfile::curvature(double s) const {
    const double w2 = width * width;
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::gaussian_bump: return (s * s / w2 - 1.0) / w2 * value(s);
        case Kind::logistic: {
            if (amplitude == 0.0) return 0.0;
            const double u = value(s) / amplitude;
            return amplitude * u * (1.0 - u) * (1.0 - 2.0 * u) / w2;
        }
    }
    return 0.0;
}

GammaProfile GammaProfile::parse(const std::string& desc) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : desc) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);

    auto num = [&](const std::string& tok) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("gamma descriptor: bad number '" + tok +
                                        "' in '" + desc + "'");
        }
    };

    const std::string& kind = parts[0];
    if (kind == "const" && parts.size() == 2) return constant(num(parts[1]));
    if (kind == "gauss" && parts.size() == 3)
        return gaussian_bump(num(parts[1]), num(parts[2]));
    if (kind == "logistic" && parts.size() == 3)
        return logistic_step(num(parts[1]), num(parts[2]));
    throw std::invalid_argument(
        "unknown gamma descriptor '" + desc +
        "'; accepted: const:G0 | gauss:G0:W | logistic:G0:W");
}

std::string GammaProfile::descriptor() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::constant: os << "const:" << amplitude; break;
        case Kind::gaussian_bump: os << "gauss:" << amplitude << ":" << width; break;
        case Kind::logistic: os << "logistic:" << amplitude << ":" << width; break;
    }
    return os.str();
}

// --------------------------------------------------------------------------
// family closed forms

Operator2 hamiltonian(const LZFamily& fam, double s) {
    return Operator2(0.5 * s, 0.5 * fam.g, 0.5 * fam.g, -0.5 * s);
}

double gap_energy(const LZFamily& fam, double s) {
    return 0.5 * std::hypot(s, fam.g);
}

namespace {

struct StableParts {
    double d;    // 2 e_s = sqrt(s^2 + g^2)
    double dms;  // d - s, computed as g^2/(d+s) for s > 0
    double dps;  // d + s, computed as g^2/(d-s) for s < 0
};

StableParts stable_parts(const LZFamily& fam, double s) {
    StableParts p;
    p.d = std::hypot(s, fam.g);
    if (s > 0.0) {
        p.dps = p.d + s;
        p.dms = fam.g * fam.g / p.dps;
    } else {
        p.dms = p.d - s;
        p.dps = fam.g * fam.g / p.dms;
    }
    return p;
}

}  // namespace

std::pair<Operator2, Operator2> projectors(const LZFamily& fam, double s) {
    const auto [d, dms, dps] = stable_parts(fam, s);
    const double od = 0.5 * fam.g / d;
    Operator2 plus(0.5 * dps / d, od, od, 0.5 * dms / d);
    Operator2 minus(0.5 * dms / d, -od, -od, 0.5 * dps / d);
    return {plus, minus};
}

Operator2 coherence_op(const LZFamily& fam, double s) {
    const auto [d, dms, dps] = stable_parts(fam, s);
    const double q = 0.5 / d;  // = 1/(4e)
    return Operator2(q * fam.g, -q * dps, q * dms, -q * fam.g);
}

std::pair<Operator2, Operator2> projector_rate(const LZFamily& fam, double s) {
    // E + E^* = (1/d) [[g, -s], [-s, -g]]; rate prefactor g/(8e^2) = g/(2d^2)
    const double d = std::hypot(s, fam.g);
    const double c = 0.5 * fam.g / (d * d * d);
    Operator2 plus(c * fam.g, -c * s, -c * s, -c * fam.g);
    return {plus, -plus};
}

Operator2 edot(const LZFamily& fam, double s) {
    // -(g/8e^2)(P+ - P-) = -(g/2d^3) [[s, g], [g, -s]]
    const double d = std::hypot(s, fam.g);
    const double c = -0.5 * fam.g / (d * d * d);
    return Operator2(c * s, c * fam.g, c * fam.g, -c * s);
}

double fs_velocity(const LZFamily& fam, double s) {
    const double d = std::hypot(s, fam.g);  // g^2/(64 e^4) = g^2/(4 d^4)
    const double d2 = d * d;
    return fam.g * fam.g / (4.0 * d2 * d2);
}

}  // namespace openlz
