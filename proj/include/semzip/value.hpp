#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semzip/util.hpp"

namespace semzip {

enum class ValueKind { Text, Boolean, Number, List };

// Tagged scalar: text | boolean | number | list-of-text. Stored as
// entered; canonicalization to comparison form happens in the normalizer.
// Numbers keep their source lexeme so case files round-trip byte-exact.
class Value {
public:
    Value() : v_(std::string()) {}

    static Value text(std::string s) { return Value(std::move(s)); }
    static Value boolean(bool b) { return Value(b); }
    static Value number(std::string lexeme) { return Value(NumberRep{std::move(lexeme)}); }
    static Value number_from(double d) { return Value(NumberRep{format_double(d)}); }
    static Value list(std::vector<std::string> items) { return Value(std::move(items)); }

    ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }
    bool is_text() const { return kind() == ValueKind::Text; }
    bool is_boolean() const { return kind() == ValueKind::Boolean; }
    bool is_number() const { return kind() == ValueKind::Number; }
    bool is_list() const { return kind() == ValueKind::List; }

    const std::string& as_text() const { return std::get<std::string>(v_); }
    bool as_boolean() const { return std::get<bool>(v_); }
    const std::string& number_lexeme() const { return std::get<NumberRep>(v_).lexeme; }
    double as_number() const { return parse_double(number_lexeme()).value_or(0.0); }
    const std::vector<std::string>& as_list() const { return std::get<std::vector<std::string>>(v_); }

    // Structural equality on the as-entered form.
    bool operator==(const Value& o) const {
        if (kind() != o.kind()) return false;
        switch (kind()) {
            case ValueKind::Text: return as_text() == o.as_text();
            case ValueKind::Boolean: return as_boolean() == o.as_boolean();
            case ValueKind::Number: return number_lexeme() == o.number_lexeme();
            case ValueKind::List: return as_list() == o.as_list();
        }
        return false;
    }
    bool operator!=(const Value& o) const { return !(*this == o); }

    // Wire form used by atom lines in case files: tag ':' payload.
    std::string serialize() const;
    static Result<Value> parse(std::string_view wire);

    // Human form without the tag (lists comma-joined, booleans true/false).
    std::string display() const;

private:
    struct NumberRep {
        std::string lexeme;
        bool operator==(const NumberRep& o) const { return lexeme == o.lexeme; }
    };
    explicit Value(std::string s) : v_(std::move(s)) {}
    explicit Value(bool b) : v_(b) {}
    explicit Value(NumberRep n) : v_(std::move(n)) {}
    explicit Value(std::vector<std::string> l) : v_(std::move(l)) {}

    std::variant<std::string, bool, NumberRep, std::vector<std::string>> v_;
};

}  // namespace semzip
