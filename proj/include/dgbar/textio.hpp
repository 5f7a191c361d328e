#ifndef DGBAR_TEXTIO_HPP
#define DGBAR_TEXTIO_HPP

#include "dgbar/bar.hpp"
#include "dgbar/hopf.hpp"
#include "dgbar/weighted.hpp"

#include <string>

namespace dgbar {

// Parse failure with source location (1-based line).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Algebra description format (see FORMATS.md). Throws ParseError.
AlgebraPtr parse_algebra(const std::string& text);

// Canonical serialization; parse(serialize(a)) describes the same algebra.
std::string serialize_algebra(const Algebra& a);

// One record per line: "weight degree dim" sorted by (weight, degree);
// capped runs append a stability column.
std::string serialize_table(const Table& t, bool annotate_stability);

// Line-oriented dump of a complex (for golden tests): dimensions and the
// differential entries in canonical order.
std::string serialize_complex(const Complex& c);

std::string serialize_validation(const ValidationReport& rep);
std::string serialize_connectivity(const ConnectivityReport& rep);
std::string serialize_hopf(const HopfAlgebra& h);
std::string serialize_hopf_report(const HopfReport& rep);

} // namespace dgbar

#endif
