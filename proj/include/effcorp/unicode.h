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

// UTF-8 helpers. All offsets in this project are byte offsets into UTF-8
// strings.

#ifndef EFFCORP_UNICODE_H_
#define EFFCORP_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace effcorp {

// Decodes the code point starting at byte `pos`, stores the offset of the
// following code point in `next`. Malformed sequences decode as U+FFFD and
// advance by one byte.
char32_t DecodeAt(std::string_view text, std::size_t pos, std::size_t *next);

// Offset of the code point preceding `pos` (pos > 0).
std::size_t PreviousBoundary(std::string_view text, std::size_t pos);

std::string NormalizeNfc(std::string_view text);
bool IsNfc(std::string_view text);

// NFC followed by full Unicode lowercasing (root locale).
std::string FoldCase(std::string_view text);
std::string ToUpper(std::string_view text);

// Letters, digits, other numbers (e.g. superscripts) and combining marks.
bool IsWordChar(char32_t c);
bool IsLetter(char32_t c);
bool IsDigit(char32_t c);
bool IsUpperLetter(char32_t c);
bool IsSpace(char32_t c);
bool IsHyphen(char32_t c);
bool IsApostrophe(char32_t c);

// Opening/closing brackets and quotation marks, ASCII and typographic.
bool IsOpeningBracket(char32_t c);
bool IsClosingBracket(char32_t c);
bool IsQuote(char32_t c);

// Number of code points.
std::size_t CodePointLength(std::string_view text);

// Trims Unicode whitespace from both ends.
std::string_view Trim(std::string_view text);

}  // namespace effcorp

#endif  // EFFCORP_UNICODE_H_
