#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geofix/correspondence.hpp"

namespace geofix::wire {

// Line-delimited JSON spoken with external matcher processes over stdio.
//
//   request:  {"id": int, "frame_png_b64": str, "window_png_b64": str,
//              "min_confidence": float}
//   response: {"id": int, "matches": [[u_img, v_img, u_map, v_map, conf], ...]}
//          or {"id": int, "error": str}
//
// One response line per request line, in order. Map coordinates are relative
// to the window image.

struct Request {
  std::int64_t id = 0;
  std::vector<std::uint8_t> frame_png;
  std::vector<std::uint8_t> window_png;
  double min_confidence = 0.0;
};

struct Response {
  std::int64_t id = 0;
  std::vector<MatchPair> matches;
  std::optional<std::string> error;
};

std::string Base64Encode(std::span<const std::uint8_t> bytes);
/// Throws Error(kDocumentMalformed) on invalid input.
std::vector<std::uint8_t> Base64Decode(std::string_view text);

/// Serialized without the trailing newline.
std::string EncodeRequest(const Request& request);
std::string EncodeResponse(const Response& response);

/// Throw Error(kDocumentMalformed) for anything that does not follow the
/// schema above.
Request DecodeRequest(std::string_view line);
Response DecodeResponse(std::string_view line);

/// Best-effort id extraction from a malformed request so an error reply can
/// still be correlated; -1 when no integer id is present.
std::int64_t PeekId(std::string_view line);

}  // namespace geofix::wire
