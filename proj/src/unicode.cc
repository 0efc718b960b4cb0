// Copyright 2026 The effcorp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "effcorp/unicode.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "effcorp/error.h"

namespace effcorp {

namespace {

const icu::Normalizer2 &Nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  return *nfc;
}

icu::UnicodeString FromUtf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

std::string ToUtf8(const icu::UnicodeString &text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

bool IsAscii(std::string_view text) {
  for (unsigned char c : text) {
    if (c >= 0x80) return false;
  }
  return true;
}

}  // namespace

char32_t DecodeAt(std::string_view text, std::size_t pos, std::size_t *next) {
  const auto *s = reinterpret_cast<const uint8_t *>(text.data());
  int32_t i = static_cast<int32_t>(pos);
  int32_t length = static_cast<int32_t>(text.size());
  UChar32 c;
  U8_NEXT(s, i, length, c);
  if (c < 0) c = 0xFFFD;
  *next = static_cast<std::size_t>(i);
  return static_cast<char32_t>(c);
}

std::size_t PreviousBoundary(std::string_view text, std::size_t pos) {
  const auto *s = reinterpret_cast<const uint8_t *>(text.data());
  int32_t i = static_cast<int32_t>(pos);
  UChar32 c;
  U8_PREV(s, 0, i, c);
  (void)c;
  return static_cast<std::size_t>(i);
}

std::string NormalizeNfc(std::string_view text) {
  if (IsAscii(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString normalized = Nfc().normalize(FromUtf8(text), status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  return ToUtf8(normalized);
}

bool IsNfc(std::string_view text) {
  if (IsAscii(text)) return true;
  UErrorCode status = U_ZERO_ERROR;
  bool result = Nfc().isNormalized(FromUtf8(text), status);
  return U_SUCCESS(status) && result;
}

std::string FoldCase(std::string_view text) {
  if (IsAscii(text)) {
    std::string out(text);
    for (char &c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString normalized = Nfc().normalize(FromUtf8(text), status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  normalized.toLower(icu::Locale::getRoot());
  return ToUtf8(normalized);
}

std::string ToUpper(std::string_view text) {
  icu::UnicodeString s = FromUtf8(text);
  s.toUpper(icu::Locale::getRoot());
  return ToUtf8(s);
}

bool IsWordChar(char32_t c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9');
  }
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_UPPERCASE_LETTER:
    case U_LOWERCASE_LETTER:
    case U_TITLECASE_LETTER:
    case U_MODIFIER_LETTER:
    case U_OTHER_LETTER:
    case U_DECIMAL_DIGIT_NUMBER:
    case U_LETTER_NUMBER:
    case U_OTHER_NUMBER:
    case U_NON_SPACING_MARK:
    case U_COMBINING_SPACING_MARK:
      return true;
    default:
      return false;
  }
}

bool IsLetter(char32_t c) { return u_isalpha(static_cast<UChar32>(c)); }

bool IsDigit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }

bool IsUpperLetter(char32_t c) { return u_isupper(static_cast<UChar32>(c)); }

bool IsSpace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool IsHyphen(char32_t c) {
  return c == U'-' || c == 0x2010 || c == 0x2011;
}

bool IsApostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

bool IsOpeningBracket(char32_t c) {
  return c == U'(' || c == U'[' || c == U'{';
}

bool IsClosingBracket(char32_t c) {
  return c == U')' || c == U']' || c == U'}';
}

bool IsQuote(char32_t c) {
  switch (c) {
    case U'"':
    case U'\'':
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
    case 0x00AB:
    case 0x00BB:
      return true;
    default:
      return false;
  }
}

std::size_t CodePointLength(std::string_view text) {
  std::size_t count = 0;
  for (std::size_t pos = 0; pos < text.size();) {
    DecodeAt(text, pos, &pos);
    ++count;
  }
  return count;
}

std::string_view Trim(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t next;
    if (!IsSpace(DecodeAt(text, begin, &next))) break;
    begin = next;
  }
  std::size_t end = text.size();
  while (end > begin) {
    std::size_t prev = PreviousBoundary(text, end);
    std::size_t ignored;
    if (!IsSpace(DecodeAt(text, prev, &ignored))) break;
    end = prev;
  }
  return text.substr(begin, end - begin);
}

}  // namespace effcorp
