#include "geofix/wire_protocol.hpp"

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "geofix/error.hpp"

namespace geofix::wire {
namespace {

using nlohmann::json;

json ParseLine(std::string_view line) {
  try {
    json doc = json::parse(line);
    if (!doc.is_object()) throw Error(ErrorCode::kDocumentMalformed, "not an object");
    return doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kDocumentMalformed,
                std::string("invalid JSON line: ") + e.what());
  }
}

std::int64_t RequireId(const json& doc) {
  if (!doc.contains("id") || !doc["id"].is_number_integer()) {
    throw Error(ErrorCode::kDocumentMalformed, "missing integer id");
  }
  return doc["id"].get<std::int64_t>();
}

}  // namespace

std::string Base64Encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw Error(ErrorCode::kDocumentMalformed, "base64 length not a multiple of 4");
  }
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(
      out.data(), reinterpret_cast<const unsigned char*>(text.data()),
      static_cast<int>(text.size()));
  if (n < 0) throw Error(ErrorCode::kDocumentMalformed, "invalid base64");
  // EVP_DecodeBlock keeps the zero bytes produced by '=' padding.
  std::size_t size = static_cast<std::size_t>(n);
  if (!text.empty() && text.back() == '=') --size;
  if (text.size() >= 2 && text[text.size() - 2] == '=') --size;
  out.resize(size);
  return out;
}

std::string EncodeRequest(const Request& request) {
  json doc;
  doc["id"] = request.id;
  doc["frame_png_b64"] = Base64Encode(request.frame_png);
  doc["window_png_b64"] = Base64Encode(request.window_png);
  doc["min_confidence"] = request.min_confidence;
  return doc.dump();
}

std::string EncodeResponse(const Response& response) {
  json doc;
  doc["id"] = response.id;
  if (response.error) {
    doc["error"] = *response.error;
    return doc.dump();
  }
  json matches = json::array();
  for (const MatchPair& m : response.matches) {
    matches.push_back({m.image_pt.u, m.image_pt.v, m.basemap_pt.u,
                       m.basemap_pt.v, m.confidence});
  }
  doc["matches"] = std::move(matches);
  return doc.dump();
}

Request DecodeRequest(std::string_view line) {
  const json doc = ParseLine(line);
  Request request;
  request.id = RequireId(doc);
  try {
    request.frame_png =
        Base64Decode(doc.at("frame_png_b64").get<std::string>());
    request.window_png =
        Base64Decode(doc.at("window_png_b64").get<std::string>());
    request.min_confidence = doc.at("min_confidence").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kDocumentMalformed,
                std::string("bad request field: ") + e.what());
  }
  if (!(request.min_confidence >= 0.0 && request.min_confidence <= 1.0)) {
    throw Error(ErrorCode::kDocumentMalformed, "min_confidence outside [0, 1]");
  }
  return request;
}

Response DecodeResponse(std::string_view line) {
  const json doc = ParseLine(line);
  Response response;
  response.id = RequireId(doc);
  if (doc.contains("error")) {
    if (!doc["error"].is_string()) {
      throw Error(ErrorCode::kDocumentMalformed, "error must be a string");
    }
    response.error = doc["error"].get<std::string>();
    return response;
  }
  if (!doc.contains("matches") || !doc["matches"].is_array()) {
    throw Error(ErrorCode::kDocumentMalformed,
                "response needs a matches array or an error");
  }
  for (const json& row : doc["matches"]) {
    if (!row.is_array() || row.size() != 5) {
      throw Error(ErrorCode::kDocumentMalformed,
                  "match rows are [u_img, v_img, u_map, v_map, conf]");
    }
    for (const json& value : row) {
      if (!value.is_number()) {
        throw Error(ErrorCode::kDocumentMalformed, "non-numeric match entry");
      }
    }
    MatchPair pair{{row[0].get<double>(), row[1].get<double>()},
                   {row[2].get<double>(), row[3].get<double>()},
                   row[4].get<double>()};
    if (!(pair.confidence >= 0.0 && pair.confidence <= 1.0)) {
      throw Error(ErrorCode::kDocumentMalformed, "confidence outside [0, 1]");
    }
    response.matches.push_back(pair);
  }
  return response;
}

std::int64_t PeekId(std::string_view line) {
  const json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_object() && doc.contains("id") && doc["id"].is_number_integer()) {
    return doc["id"].get<std::int64_t>();
  }
  return -1;
}

}  // namespace geofix::wire
