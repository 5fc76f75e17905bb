// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/korean_text.hpp"

namespace kmr {

bool ends_with_batchim(const std::string& utf8) {
  // Decode the final UTF-8 codepoint.
  if (utf8.empty()) return false;
  size_t i = utf8.size();
  while (i > 0 && (static_cast<unsigned char>(utf8[i - 1]) & 0xc0) == 0x80) --i;
  if (i == 0) return false;
  --i;
  const unsigned char lead = static_cast<unsigned char>(utf8[i]);
  uint32_t cp = 0;
  size_t len = 0;
  if (lead < 0x80) {
    cp = lead;
    len = 1;
  } else if ((lead & 0xe0) == 0xc0) {
    cp = lead & 0x1f;
    len = 2;
  } else if ((lead & 0xf0) == 0xe0) {
    cp = lead & 0x0f;
    len = 3;
  } else {
    cp = lead & 0x07;
    len = 4;
  }
  if (i + len != utf8.size()) return false;
  for (size_t k = 1; k < len; ++k) {
    cp = (cp << 6) | (static_cast<unsigned char>(utf8[i + k]) & 0x3f);
  }
  if (cp < 0xac00 || cp > 0xd7a3) return false;
  return (cp - 0xac00) % 28 != 0;
}

std::string subject_particle(const std::string& word) {
  return ends_with_batchim(word) ? "이" : "가";
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

}  // namespace kmr
