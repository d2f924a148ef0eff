#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <functional>

namespace isodisplay {

// Exact rational over 64-bit integers. All arithmetic goes through 128-bit
// intermediates and is reduced immediately; anything that would leave the
// 64-bit range after reduction throws std::overflow_error instead of
// silently wrapping.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) {
        if (d == 0) throw std::invalid_argument("Rat: zero denominator");
        __int128 nn = n, dd = d;
        normalize(nn, dd);
        num_ = clamp(nn);
        den_ = clamp(dd);
    }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rat operator-() const { return Rat(raw(), -(__int128)num_, den_); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return Rat(raw(), n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num_ * b.num_;
        __int128 d = (__int128)a.den_ * b.den_;
        return Rat(raw(), n, d);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        __int128 n = (__int128)a.num_ * b.den_;
        __int128 d = (__int128)a.den_ * b.num_;
        return Rat(raw(), n, d);
    }

    Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
    Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
    Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    Rat abs() const { return num_ < 0 ? -*this : *this; }

    // "p/q" with q omitted when 1; accepts plain integers too.
    static Rat parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat(std::stoll(s));
            long long n = std::stoll(s.substr(0, slash));
            long long d = std::stoll(s.substr(slash + 1));
            return Rat(n, d);
        } catch (const std::overflow_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("Rat: cannot parse '" + s + "'");
        }
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    struct raw {};  // tag: construct from 128-bit pre-normalized pair
    Rat(raw, __int128 n, __int128 d) {
        normalize(n, d);
        num_ = clamp(n);
        den_ = clamp(d);
    }

    static void normalize(__int128& n, __int128& d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n == 0) d = 1;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
    static long long clamp(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("Rat: value exceeds 64-bit range after reduction");
        return static_cast<long long>(v);
    }

    long long num_;
    long long den_;
};

struct RatHash {
    size_t operator()(const Rat& r) const {
        size_t h = std::hash<long long>()(r.num());
        h ^= std::hash<long long>()(r.den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace isodisplay
