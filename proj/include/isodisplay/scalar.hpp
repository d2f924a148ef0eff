#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "isodisplay/rational.hpp"

namespace isodisplay {

inline constexpr double kDefaultTolerance = 1e-9;

// A scalar tagged exact (rational) or float. Exact values compare with no
// tolerance; float values carry the configured tolerance. Mixing modes in
// one computation is rejected.
class Scalar {
public:
    enum class Mode { Exact, Float };

    Scalar() : mode_(Mode::Exact), rat_(), flt_(0.0) {}
    Scalar(Rat r) : mode_(Mode::Exact), rat_(r), flt_(r.to_double()) {}
    Scalar(double f) : mode_(Mode::Float), rat_(), flt_(f) {}

    Mode mode() const { return mode_; }
    bool exact() const { return mode_ == Mode::Exact; }

    const Rat& rat() const {
        if (mode_ != Mode::Exact) throw std::logic_error("Scalar: float value used as exact");
        return rat_;
    }
    double value() const { return flt_; }

    bool eq(const Scalar& o, double tol = kDefaultTolerance) const {
        require_same_mode(o);
        if (exact()) return rat_ == o.rat_;
        return std::fabs(flt_ - o.flt_) <= tol;
    }

    Scalar operator+(const Scalar& o) const {
        require_same_mode(o);
        return exact() ? Scalar(rat_ + o.rat_) : Scalar(flt_ + o.flt_);
    }
    Scalar operator-(const Scalar& o) const {
        require_same_mode(o);
        return exact() ? Scalar(rat_ - o.rat_) : Scalar(flt_ - o.flt_);
    }
    Scalar operator*(const Scalar& o) const {
        require_same_mode(o);
        return exact() ? Scalar(rat_ * o.rat_) : Scalar(flt_ * o.flt_);
    }

    std::string str() const { return exact() ? rat_.str() : std::to_string(flt_); }

private:
    void require_same_mode(const Scalar& o) const {
        if (mode_ != o.mode_) throw std::invalid_argument("Scalar: mixing exact and float modes");
    }

    Mode mode_;
    Rat rat_;
    double flt_;
};

}  // namespace isodisplay
