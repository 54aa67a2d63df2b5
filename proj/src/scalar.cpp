#include "mclab/scalar.hpp"

#include <cctype>

#include "mclab/errors.hpp"

namespace mclab {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

BigInt parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
    // GMP reads a leading zero as an octal prefix.
    while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
    BigInt z{std::string(s)};
    return negative ? BigInt(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty rational literal");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_integer(text.substr(0, slash));
        const BigInt den = parse_integer(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }

    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view int_part = text.substr(0, dot);
        const std::string_view frac_part = text.substr(dot + 1);
        if (!frac_part.empty() && !all_digits(frac_part)) {
            throw ParseError("bad decimal literal '" + std::string(text) + "'");
        }
        const bool negative = !int_part.empty() && int_part.front() == '-';
        std::string digits(int_part);
        if (digits.empty() || digits == "-" || digits == "+") digits += "0";
        digits += frac_part;
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
        BigInt num = parse_integer(digits);
        if (negative && num > 0) num = -num;
        return Rational(num, scale);
    }

    return Rational(parse_integer(text));
}

std::string format_rational(const Rational& q) {
    return BigInt(numerator(q)).str() + "/" + BigInt(denominator(q)).str();
}

}  // namespace mclab
