#include "syzlab/rational.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

#include "syzlab/errors.hpp"

namespace syz {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < -INT64_MAX) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

Rational make(i128 num, i128 den) {
    if (den == 0) throw ValidationError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return Rational(narrow(num), narrow(den));
}

std::string trim(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    }
    return out;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

Rational parse_decimal(const std::string& text) {
    std::string s = text;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        std::string e = s.substr(epos + 1);
        s = s.substr(0, epos);
        std::string digits = e;
        if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) digits = digits.substr(1);
        if (!all_digits(digits)) throw ValidationError("malformed number: " + text);
        exp10 = std::stol(e);
    }
    auto dot = s.find('.');
    std::string ip = dot == std::string::npos ? s : s.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw ValidationError("malformed number: " + text);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
        throw ValidationError("malformed number: " + text);
    }
    std::string digits = ip + fp;
    while (digits.size() > 1 && digits[0] == '0') digits.erase(0, 1);
    exp10 -= static_cast<long>(fp.size());
    if (digits.size() > 36) throw std::overflow_error("decimal too long for exact mode");
    i128 num = 0;
    for (char c : digits) num = num * 10 + (c - '0');
    i128 den = 1;
    if (std::labs(exp10) > 36) throw std::overflow_error("decimal exponent too large");
    for (long i = 0; i < std::labs(exp10); ++i) {
        if (exp10 > 0) {
            num *= 10;
        } else {
            den *= 10;
        }
    }
    if (neg) num = -num;
    return make(num, den);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ValidationError("rational with zero denominator");
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw ValidationError("rational division by zero");
    return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

Rational Rational::parse(const std::string& text) {
    std::string s = trim(text);
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);
    Rational p = parse_decimal(s.substr(0, slash));
    Rational q = parse_decimal(s.substr(slash + 1));
    if (q.is_zero()) throw ValidationError("rational with zero denominator: " + text);
    return p / q;
}

ComplexInput parse_complex(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw ValidationError("empty complex literal");
    std::string re_part;
    std::string im_part;
    if (s.back() == 'i' || s.back() == 'j') {
        std::string body = s.substr(0, s.size() - 1);
        // Split at the last sign that is not a leading sign or an exponent sign.
        std::size_t split = std::string::npos;
        for (std::size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E' &&
                body[k - 1] != '/') {
                split = k;
                break;
            }
        }
        if (split == std::string::npos) {
            re_part = "0";
            im_part = body;
        } else {
            re_part = body.substr(0, split);
            im_part = body.substr(split);
        }
        if (im_part.empty() || im_part == "+") im_part = "1";
        if (im_part == "-") im_part = "-1";
    } else {
        re_part = s;
        im_part = "0";
    }
    ComplexInput out;
    try {
        Rational re = Rational::parse(re_part);
        Rational im = Rational::parse(im_part);
        out.exact = ExactComplex{re, im};
        out.value = {re.to_double(), im.to_double()};
    } catch (const std::overflow_error&) {
        try {
            out.value = {std::stod(re_part), std::stod(im_part)};
        } catch (const std::exception&) {
            throw ValidationError("malformed complex literal: " + text);
        }
    }
    return out;
}

std::optional<Rational> rational_approx(double x, double tol, std::int64_t max_den) {
    if (!std::isfinite(x)) return std::nullopt;
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        if (std::abs(a) > 1e15) break;
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t h2 = ai * h1 + h0;
        std::int64_t k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) {
            return Rational(h1, k1);
        }
        double frac = r - a;
        if (frac == 0.0) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

}  // namespace syz
