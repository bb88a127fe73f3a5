#include "vhb/rational.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <system_error>

namespace vhb {

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) {
        throw std::invalid_argument("empty integer in rational literal '" + std::string(whole) + "'");
    }
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("bad rational literal '" + std::string(whole) + "'");
        }
    }
    // A leading 0 would select octal in the Boost string constructor.
    const auto nz = digits.find_first_not_of('0');
    if (nz == std::string_view::npos) return BigInt(0);
    return BigInt(std::string(digits.substr(nz)));
}

BigInt pow10(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 0; i < n; ++i) r *= 10;
    return r;
}

}  // namespace

ParsedRational parse_rational_literal(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational literal");

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    ParsedRational out;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(text.substr(0, slash), whole);
        BigInt den = parse_integer(text.substr(slash + 1), whole);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
        out.value = Rational(num, den);
    } else {
        std::string_view mantissa = text;
        long exponent = 0;
        if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
            mantissa = text.substr(0, e);
            std::string_view exp_text = text.substr(e + 1);
            bool exp_neg = false;
            if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
                exp_neg = exp_text.front() == '-';
                exp_text.remove_prefix(1);
            }
            auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
            if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) {
                throw std::invalid_argument("bad exponent in '" + std::string(whole) + "'");
            }
            if (exp_neg) exponent = -exponent;
            out.decimal = true;
        }
        std::string digits;
        long frac_digits = 0;
        if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
            digits = std::string(mantissa.substr(0, dot)) + std::string(mantissa.substr(dot + 1));
            frac_digits = static_cast<long>(mantissa.size() - dot - 1);
            out.decimal = true;
        } else {
            digits = std::string(mantissa);
        }
        BigInt num = parse_integer(digits, whole);
        long shift = exponent - frac_digits;
        if (shift >= 0) {
            out.value = Rational(num * pow10(static_cast<unsigned>(shift)));
        } else {
            out.value = Rational(num, pow10(static_cast<unsigned>(-shift)));
        }
    }
    if (negative) out.value = -out.value;
    return out;
}

Rational parse_rational(std::string_view text) { return parse_rational_literal(text).value; }

std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_from_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::invalid_argument("cannot format double");
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

BigInt lcm(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

Rational floor_rational(const Rational& r) {
    BigInt n = boost::multiprecision::numerator(r);
    BigInt d = boost::multiprecision::denominator(r);
    BigInt q = n / d;
    if (n % d != 0 && n < 0) q -= 1;
    return Rational(q);
}

}  // namespace vhb
