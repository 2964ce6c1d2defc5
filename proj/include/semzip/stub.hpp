#pragma once

#include <memory>
#include <string>
#include <vector>

#include "semzip/codec.hpp"

namespace semzip {

// Offline deterministic decoder double. Reconstructs atoms from a prompt
// by running the symbolic parsers (and an inverse of the prose template);
// canonical-structured payloads echo through. Ships with the repo so the
// full pipeline runs with no credentials.

// Pulls the payload out of a rendered prompt and reconstructs atoms.
std::vector<SemanticAtom> stub_reconstruct(const std::string& prompt, const CodecTables& tables);

// Full chat-completion round trip: request body in, response body out.
std::string stub_chat_completion(const std::string& request_body, const CodecTables& tables);

// Loopback HTTP server speaking the chat-completion contract; used by the
// standalone tool and the transport tests. Port 0 picks a free port.
class StubDecoderServer {
public:
    explicit StubDecoderServer(const CodecTables& tables);
    ~StubDecoderServer();

    StubDecoderServer(const StubDecoderServer&) = delete;
    StubDecoderServer& operator=(const StubDecoderServer&) = delete;

    Result<int> start(int port = 0);  // returns the bound port
    void stop();

    // The next n requests answer with `status` before recovering; for
    // retry-path tests.
    void fail_next(int n, int status);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace semzip
