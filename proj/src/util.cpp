#include "semzip/util.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace semzip {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string> split_any(std::string_view s, std::string_view seps) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || seps.find(s[i]) != std::string_view::npos) {
            if (i > start) out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

Result<std::vector<std::string>> split_quoted(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (is_ascii_space(line[i])) {
            ++i;
            continue;
        }
        std::string tok;
        while (i < line.size() && !is_ascii_space(line[i])) {
            if (line[i] == '"') {
                ++i;
                bool closed = false;
                while (i < line.size()) {
                    char c = line[i];
                    if (c == '\\') {
                        if (i + 1 >= line.size()) return err("dangling escape in quoted token");
                        char e = line[i + 1];
                        switch (e) {
                            case 'n': tok += '\n'; break;
                            case 't': tok += '\t'; break;
                            case '"': tok += '"'; break;
                            case '\\': tok += '\\'; break;
                            default: return err(std::string("unknown escape \\") + e);
                        }
                        i += 2;
                    } else if (c == '"') {
                        ++i;
                        closed = true;
                        break;
                    } else {
                        tok += c;
                        ++i;
                    }
                }
                if (!closed) return err("unterminated quote");
            } else {
                tok += line[i];
                ++i;
            }
        }
        out.push_back(std::move(tok));
    }
    return out;
}

std::string quote_if_needed(std::string_view s) {
    bool need = s.empty();
    for (char c : s)
        if (is_ascii_space(c) || c == '"' || c == '\\') need = true;
    if (!need) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

Result<std::string> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return err("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Status write_file(const std::string& path, std::string_view content) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) return err("cannot open file for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) return err("write failed: " + path);
    return ok_status();
}

namespace {
constexpr char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

Result<std::string> base64_decode(std::string_view s) {
    if (s.size() % 4 != 0) return err("base64 length not a multiple of 4");
    std::string out;
    out.reserve(s.size() / 4 * 3);
    for (std::size_t i = 0; i < s.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            char c = s[i + k];
            if (c == '=') {
                if (k < 2 || (k == 2 && s[i + 3] != '=')) return err("misplaced base64 padding at offset " + std::to_string(i + k));
                vals[k] = 0;
                ++pad;
            } else {
                if (pad > 0) return err("base64 data after padding at offset " + std::to_string(i + k));
                vals[k] = b64_value(c);
                if (vals[k] < 0) return err("invalid base64 character at offset " + std::to_string(i + k));
            }
        }
        std::uint32_t word = (static_cast<std::uint32_t>(vals[0]) << 18) | (static_cast<std::uint32_t>(vals[1]) << 12) |
                             (static_cast<std::uint32_t>(vals[2]) << 6) | static_cast<std::uint32_t>(vals[3]);
        out += static_cast<char>((word >> 16) & 0xFF);
        if (pad < 2) out += static_cast<char>((word >> 8) & 0xFF);
        if (pad < 1) out += static_cast<char>(word & 0xFF);
    }
    return out;
}

std::string base64_encode(std::string_view bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        std::uint32_t word = static_cast<unsigned char>(bytes[i]) << 16;
        std::size_t rem = bytes.size() - i;
        if (rem > 1) word |= static_cast<unsigned char>(bytes[i + 1]) << 8;
        if (rem > 2) word |= static_cast<unsigned char>(bytes[i + 2]);
        out += kB64Chars[(word >> 18) & 0x3F];
        out += kB64Chars[(word >> 12) & 0x3F];
        out += rem > 1 ? kB64Chars[(word >> 6) & 0x3F] : '=';
        out += rem > 2 ? kB64Chars[word & 0x3F] : '=';
    }
    return out;
}

}  // namespace semzip
