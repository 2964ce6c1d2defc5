#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace semzip {

// Error carried by Result. `line` is 1-based when the error refers to a
// position in a parsed document, 0 otherwise.
struct Error {
    std::string message;
    int line = 0;

    std::string to_string() const {
        if (line > 0) return "line " + std::to_string(line) + ": " + message;
        return message;
    }
};

inline Error err(std::string message, int line = 0) { return Error{std::move(message), line}; }

template <typename T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Error e) : v_(std::move(e)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    T& value() { return std::get<T>(v_); }
    const T& value() const { return std::get<T>(v_); }
    T& operator*() { return value(); }
    const T& operator*() const { return value(); }
    T* operator->() { return &value(); }
    const T* operator->() const { return &value(); }

    const Error& error() const { return std::get<Error>(v_); }

private:
    std::variant<T, Error> v_;
};

// Result for operations with no payload.
using Status = Result<std::monostate>;
inline Status ok_status() { return Status(std::monostate{}); }

// ---- string helpers ----

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_any(std::string_view s, std::string_view seps);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Splits a line into whitespace-separated tokens, honoring double quotes
// with backslash escapes. Used by the key=value line formats.
Result<std::vector<std::string>> split_quoted(std::string_view line);

// Quotes `s` if it contains whitespace, quotes, or backslashes; escapes
// \" \\ \n \t inside quotes. Inverse of the unquoting in split_quoted.
std::string quote_if_needed(std::string_view s);

// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double v);
std::optional<double> parse_double(std::string_view s);

// ---- file helpers ----

Result<std::string> read_file(const std::string& path);
Status write_file(const std::string& path, std::string_view content);

// ---- base64 (strict) ----

Result<std::string> base64_decode(std::string_view s);
std::string base64_encode(std::string_view bytes);

}  // namespace semzip
