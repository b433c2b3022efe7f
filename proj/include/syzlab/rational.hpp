#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace syz {

// Exact rational with 64-bit numerator and denominator.  Arithmetic is
// checked: any intermediate that does not fit throws std::overflow_error, so
// callers can fall back to floating-point mode instead of silently wrapping.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    // Accepts "p", "p/q" and plain decimals such as "-0.25" or "1.5e-3".
    static Rational parse(const std::string& text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

struct ExactComplex {
    Rational re;
    Rational im;
};

struct ComplexInput {
    std::complex<double> value;
    std::optional<ExactComplex> exact;  // present when both parts parsed exactly
};

// Parses the literal form a+bi (also "bi", "a", "i", "-i") where a and b are
// decimals or p/q rationals.
ComplexInput parse_complex(const std::string& text);

// Continued-fraction search for p/q with q <= max_den and |x - p/q| <= tol.
std::optional<Rational> rational_approx(double x, double tol = 1e-9,
                                        std::int64_t max_den = 10000);

}  // namespace syz
