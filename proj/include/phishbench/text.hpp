/*
 * Copyright 2026 The PhishBench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace phishbench {

// Removes markup and normalizes whitespace.
//
// A '<' followed by a letter, '/', '!' or '?' opens a tag which runs to the
// next '>' (or to the end of the input when unclosed). The contents of
// <script> and <style> elements are dropped together with their tags. The
// entities &amp; &lt; &gt; &quot; &apos; are decoded. Control characters and
// every Unicode white-space code point count as white space; runs collapse to
// one ASCII space and the result is trimmed. Invalid UTF-8 bytes are dropped.
//
// The pass is repeated until the text stops changing, so the function is
// idempotent even when decoded entities form new markup. No pass ever grows
// the text, which bounds the loop.
std::string CleanText(std::string_view raw);

// Lower-cased maximal runs of letters/digits; terms of one code point are
// dropped. Order is preserved.
std::vector<std::string> Tokenize(std::string_view text);

namespace utf8 {

// Decodes one code point starting at `pos`. On invalid input returns
// kInvalid and advances by one byte.
inline constexpr char32_t kInvalid = 0xFFFFFFFF;
char32_t Decode(std::string_view text, size_t& pos);
void Append(std::string& out, char32_t cp);
bool IsValid(std::string_view text);
size_t CodePointCount(std::string_view text);

bool IsWhitespace(char32_t cp);
bool IsAlnum(char32_t cp);
char32_t ToLower(char32_t cp);

}  // namespace utf8
}  // namespace phishbench
