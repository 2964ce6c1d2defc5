#pragma once

#include <string>
#include <string_view>

namespace semzip {

// SHA-256 digest as a lowercase hex string. Used for the run manifest's
// content hashes (case set, alias table, grammar tables, prompt template,
// vocabulary files).
std::string sha256_hex(std::string_view data);

}  // namespace semzip
