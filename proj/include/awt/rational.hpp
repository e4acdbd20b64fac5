#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace awt {

/// Exact rational number with canonical form: gcd(num, den) == 1, den > 0.
/// All arithmetic goes through a 128-bit intermediate and throws
/// std::overflow_error if the reduced result does not fit in 64 bits.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) { assign(n, d); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    /// Floor for nonnegative and negative values alike.
    long long floor() const {
        if (num_ >= 0) return num_ / den_;
        return -(((-num_) + den_ - 1) / den_);
    }

    /// Fractional part, always in [0, 1).
    Rat frac() const { return *this - Rat(floor()); }

    Rat abs() const { return num_ < 0 ? Rat(-num_, den_) : *this; }

    Rat operator-() const { return Rat(-num_, den_); }

    Rat operator+(const Rat& o) const {
        i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
        i128 d = i128(den_) * o.den_;
        return make(n, d);
    }
    Rat operator-(const Rat& o) const { return *this + (-o); }
    Rat operator*(const Rat& o) const {
        return make(i128(num_) * o.num_, i128(den_) * o.den_);
    }
    Rat operator/(const Rat& o) const {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        i128 n = i128(num_) * o.den_;
        i128 d = i128(den_) * o.num_;
        return make(n, d);
    }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }

    bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const {
        return i128(num_) * o.den_ < i128(o.num_) * den_;
    }
    bool operator>(const Rat& o) const { return o < *this; }
    bool operator<=(const Rat& o) const { return !(o < *this); }
    bool operator>=(const Rat& o) const { return !(*this < o); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "p", "p/q" and finite decimals such as "0.5".
    static Rat parse(const std::string& text);

private:
    using i128 = __int128;

    void assign(long long n, long long d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }

    static Rat make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 a = n < 0 ? -n : n;
        i128 g = gcd128(a, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Rat r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a;
    }

    long long num_;
    long long den_;
};

inline Rat Rat::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto parse_ll = [](const std::string& s) -> long long {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad integer literal: " + s);
        return v;
    };
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        long long n = parse_ll(text.substr(0, slash));
        long long d = parse_ll(text.substr(slash + 1));
        return Rat(n, d);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
        if (fp.empty() || fp.size() > 18)
            throw std::invalid_argument("bad decimal literal: " + text);
        bool neg = !ip.empty() && ip[0] == '-';
        long long whole = ip.empty() || ip == "-" ? 0 : parse_ll(ip);
        long long den = 1;
        for (size_t i = 0; i < fp.size(); ++i) {
            if (fp[i] < '0' || fp[i] > '9')
                throw std::invalid_argument("bad decimal literal: " + text);
            den *= 10;
        }
        long long fnum = fp.empty() ? 0 : parse_ll(fp);
        Rat r = Rat(whole < 0 ? -whole : whole) + Rat(fnum, den);
        return neg ? -r : r;
    }
    return Rat(parse_ll(text));
}

} // namespace awt
