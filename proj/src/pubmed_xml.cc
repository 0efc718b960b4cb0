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

#include "effcorp/pubmed_xml.h"

#include <expat.h>
#include <zlib.h>

#include <cstring>
#include <memory>

#include "effcorp/error.h"
#include "effcorp/unicode.h"

namespace effcorp {

namespace {

struct PendingSection {
  std::string label;
  std::string text;
};

// SAX state for one document. Element names are compared without
// namespaces; PubMed exports do not use them.
class ArticleSetHandler {
 public:
  static void XMLCALL Start(void *data, const XML_Char *name,
                            const XML_Char **attrs) {
    static_cast<ArticleSetHandler *>(data)->OnStart(name, attrs);
  }
  static void XMLCALL End(void *data, const XML_Char *name) {
    static_cast<ArticleSetHandler *>(data)->OnEnd(name);
  }
  static void XMLCALL Text(void *data, const XML_Char *s, int len) {
    static_cast<ArticleSetHandler *>(data)->OnText(s, len);
  }

  PubmedParseResult &result() { return result_; }

 private:
  enum class Capture { kNone, kPmid, kTitle, kAbstract, kLanguage };

  const std::string &Parent() const {
    static const std::string kEmpty;
    return path_.size() >= 2 ? path_[path_.size() - 2] : kEmpty;
  }

  bool InsideArticle() const { return article_depth_ > 0; }

  void OnStart(const char *name, const char **attrs) {
    path_.emplace_back(name);
    const std::string &element = path_.back();

    if (!InsideArticle() &&
        (element == "PubmedArticle" || element == "MedlineCitation")) {
      article_depth_ = path_.size();
      pmid_.clear();
      title_.clear();
      language_.clear();
      sections_.clear();
      have_pmid_ = have_title_ = false;
      return;
    }
    if (!InsideArticle() || capture_ != Capture::kNone) return;

    if (element == "PMID" && Parent() == "MedlineCitation" && !have_pmid_) {
      BeginCapture(Capture::kPmid);
    } else if (element == "ArticleTitle" && Parent() == "Article" &&
               !have_title_) {
      BeginCapture(Capture::kTitle);
    } else if (element == "Language" && Parent() == "Article" &&
               language_.empty()) {
      BeginCapture(Capture::kLanguage);
    } else if (element == "AbstractText" && Parent() == "Abstract") {
      PendingSection section;
      const char *label = nullptr;
      const char *category = nullptr;
      for (int i = 0; attrs[i] != nullptr; i += 2) {
        if (std::strcmp(attrs[i], "Label") == 0) label = attrs[i + 1];
        if (std::strcmp(attrs[i], "NlmCategory") == 0) category = attrs[i + 1];
      }
      if (label != nullptr) {
        section.label = label;
      } else if (category != nullptr) {
        section.label = category;
      }
      sections_.push_back(std::move(section));
      BeginCapture(Capture::kAbstract);
    }
  }

  void BeginCapture(Capture capture) {
    capture_ = capture;
    capture_depth_ = path_.size();
    buffer_.clear();
  }

  void OnEnd(const char *) {
    if (capture_ != Capture::kNone && path_.size() == capture_depth_) {
      std::string text(Trim(buffer_));
      switch (capture_) {
        case Capture::kPmid:
          pmid_ = std::move(text);
          have_pmid_ = true;
          break;
        case Capture::kTitle:
          title_ = std::move(text);
          have_title_ = true;
          break;
        case Capture::kLanguage:
          language_ = std::move(text);
          break;
        case Capture::kAbstract:
          sections_.back().text = std::move(text);
          break;
        case Capture::kNone:
          break;
      }
      capture_ = Capture::kNone;
    }
    if (InsideArticle() && path_.size() == article_depth_) FinishArticle();
    path_.pop_back();
  }

  void OnText(const char *s, int len) {
    if (capture_ != Capture::kNone) buffer_.append(s, static_cast<size_t>(len));
  }

  void FinishArticle() {
    article_depth_ = 0;
    std::size_t index = article_index_++;
    std::string reason;
    if (pmid_.empty()) {
      reason = "missing pmid";
    } else if (title_.empty()) {
      reason = "missing title";
    }
    AbstractRecord record;
    record.pmid = pmid_;
    record.title = NormalizeNfc(title_);
    record.source = Source::kPubmedXml;
    if (!language_.empty()) record.language = language_;
    for (PendingSection &pending : sections_) {
      if (pending.text.empty()) continue;
      Section section;
      section.label_raw = std::move(pending.label);
      section.text = NormalizeNfc(pending.text);
      record.sections.push_back(std::move(section));
    }
    if (reason.empty() && record.sections.empty()) reason = "no abstract text";
    if (!reason.empty()) {
      result_.skipped.push_back({index, pmid_, reason});
      return;
    }
    result_.records.push_back(std::move(record));
  }

  std::vector<std::string> path_;
  std::size_t article_depth_ = 0;
  std::size_t article_index_ = 0;
  Capture capture_ = Capture::kNone;
  std::size_t capture_depth_ = 0;
  std::string buffer_;

  std::string pmid_;
  std::string title_;
  std::string language_;
  std::vector<PendingSection> sections_;
  bool have_pmid_ = false;
  bool have_title_ = false;

  PubmedParseResult result_;
};

struct ParserDeleter {
  void operator()(XML_Parser parser) const { XML_ParserFree(parser); }
};

}  // namespace

std::string MaybeGunzip(std::string_view bytes) {
  bool gzip = bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
              static_cast<unsigned char>(bytes[1]) == 0x8b;
  if (!gzip) return std::string(bytes);

  z_stream stream{};
  // 15 window bits plus 32: automatic gzip/zlib header detection.
  if (inflateInit2(&stream, 15 + 32) != Z_OK) {
    throw Error("zlib initialization failed");
  }
  std::unique_ptr<z_stream, int (*)(z_stream *)> guard(&stream, inflateEnd);
  stream.next_in = reinterpret_cast<Bytef *>(const_cast<char *>(bytes.data()));
  stream.avail_in = static_cast<uInt>(bytes.size());

  std::string out;
  char chunk[1 << 16];
  int status = Z_OK;
  while (status != Z_STREAM_END) {
    stream.next_out = reinterpret_cast<Bytef *>(chunk);
    stream.avail_out = sizeof(chunk);
    status = inflate(&stream, Z_NO_FLUSH);
    if (status != Z_OK && status != Z_STREAM_END) {
      throw ParseError("corrupt gzip stream", stream.total_in);
    }
    out.append(chunk, sizeof(chunk) - stream.avail_out);
    if (status == Z_OK && stream.avail_in == 0 && stream.avail_out != 0) {
      throw ParseError("truncated gzip stream", stream.total_in);
    }
  }
  return out;
}

PubmedParseResult ParsePubmedXml(std::string_view input) {
  std::string bytes = MaybeGunzip(input);
  if (Trim(bytes).empty()) return {};

  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(
      XML_ParserCreate("UTF-8"));
  if (!parser) throw Error("cannot create XML parser");
  ArticleSetHandler handler;
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(parser.get(), &ArticleSetHandler::Start,
                        &ArticleSetHandler::End);
  XML_SetCharacterDataHandler(parser.get(), &ArticleSetHandler::Text);

  if (XML_Parse(parser.get(), bytes.data(), static_cast<int>(bytes.size()),
                XML_TRUE) == XML_STATUS_ERROR) {
    auto offset = XML_GetCurrentByteIndex(parser.get());
    throw ParseError(
        std::string("malformed XML at byte ") + std::to_string(offset) + ": " +
            XML_ErrorString(XML_GetErrorCode(parser.get())),
        offset < 0 ? 0 : static_cast<std::size_t>(offset));
  }
  return std::move(handler.result());
}

}  // namespace effcorp
