#include "cbd/rational.hpp"

#include <cctype>

#include "cbd/errors.hpp"

namespace cbd {

Rat make_rat(long num, long den) {
    if (den == 0) throw Error(Errc::ParseError, "zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Rat parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    auto fail = [&] { return Error(Errc::ParseError, "bad rational '" + std::string(text) + "'"); };

    std::size_t slash = body.find('/');
    std::size_t dot = body.find('.');
    Rat value;
    if (slash != std::string_view::npos) {
        std::string_view num = body.substr(0, slash);
        std::string_view den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw fail();
        // Base 10 explicitly: the gmp default of 0 reads leading zeros as octal.
        value = Rat(std::string(num) + "/" + std::string(den), 10);
        if (value.get_den() == 0) throw fail();
        value.canonicalize();
    } else if (dot != std::string_view::npos) {
        std::string_view whole = body.substr(0, dot);
        std::string_view frac = body.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac)) throw fail();
        mpz_class scaled(std::string(whole) + std::string(frac), 10);
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        value = Rat(scaled, den);
        value.canonicalize();
    } else {
        if (!all_digits(body)) throw fail();
        value = Rat(mpz_class(std::string(body), 10));
    }
    if (negative) value = -value;
    return value;
}

std::string to_string(const Rat& value) {
    return value.get_str();
}

Rat rat_abs(const Rat& value) {
    return value < 0 ? Rat(-value) : value;
}

bool in_unit_interval(const Rat& value) {
    return value >= 0 && value <= 1;
}

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NonUnitMass: return "NonUnitMass";
        case Errc::NegativeProbability: return "NegativeProbability";
        case Errc::DuplicateContent: return "DuplicateContent";
        case Errc::OverconnectedContent: return "OverconnectedContent";
        case Errc::DuplicateContextLabel: return "DuplicateContextLabel";
        case Errc::EmptySystem: return "EmptySystem";
        case Errc::UnknownContent: return "UnknownContent";
        case Errc::WrongArity: return "WrongArity";
        case Errc::InvalidTable: return "InvalidTable";
        case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::SystemTooLarge: return "SystemTooLarge";
        case Errc::NotConsistentlyConnected: return "NotConsistentlyConnected";
        case Errc::TooManyContents: return "TooManyContents";
        case Errc::ParseError: return "ParseError";
        case Errc::WrongShape: return "WrongShape";
    }
    return "UnknownError";
}

}  // namespace cbd
