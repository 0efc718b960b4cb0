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

#include "effcorp/concept.h"

#include <algorithm>
#include <utility>

#include "effcorp/corpus_io.h"
#include "effcorp/digest.h"
#include "effcorp/error.h"
#include "effcorp/unicode.h"

namespace effcorp {

namespace {

std::string LineError(std::size_t line_no, const std::string &message) {
  return "line " + std::to_string(line_no) + ": " + message;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

bool WhitespaceOnly(std::string_view text, std::size_t begin, std::size_t end) {
  for (std::size_t pos = begin; pos < end;) {
    std::size_t next;
    if (!IsSpace(DecodeAt(text, pos, &next))) return false;
    pos = next;
  }
  return true;
}

// Number of tokens from `i` on (at most `limit`) joined by whitespace gaps.
std::size_t RunLength(std::string_view text, const std::vector<Token> &tokens,
                      std::size_t i, std::size_t limit) {
  std::size_t n = 1;
  while (n < limit && i + n < tokens.size() &&
         WhitespaceOnly(text, tokens[i + n - 1].span.end, tokens[i + n].span.begin)) {
    ++n;
  }
  return n;
}

std::string JoinKey(const std::vector<Token> &tokens, std::size_t i, std::size_t n,
                    bool folded) {
  std::string key;
  for (std::size_t k = i; k < i + n; ++k) {
    if (k > i) key += ' ';
    key += folded ? tokens[k].normalized : tokens[k].surface;
  }
  return key;
}

struct Replacement {
  Span span;
  const ConceptTag *tag;
  MentionVia via;
};

std::vector<Replacement> FindReplacements(
    std::string_view text, const ConceptDictionary &dict,
    const std::map<std::string, const ConceptTag *> &by_concept,
    const std::map<std::string, const ConceptTag *> &by_short_form,
    std::size_t short_form_tokens) {
  std::vector<Replacement> out;
  std::vector<Token> tokens = Tokenize(text);
  std::size_t limit = std::max(dict.max_tokens(), short_form_tokens);
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t run = RunLength(text, tokens, i, limit);
    std::size_t consumed = 0;
    for (std::size_t n = run; n >= 1 && consumed == 0; --n) {
      Span span{tokens[i].span.begin, tokens[i + n - 1].span.end};
      if (const std::string *id = dict.Lookup(JoinKey(tokens, i, n, true))) {
        auto tag = by_concept.find(*id);
        if (tag != by_concept.end()) out.push_back({span, tag->second, MentionVia::kDictionary});
        consumed = n;
      } else {
        auto tag = by_short_form.find(JoinKey(tokens, i, n, false));
        if (tag != by_short_form.end()) {
          out.push_back({span, tag->second, MentionVia::kAbbreviationLink});
          consumed = n;
        }
      }
    }
    i += std::max<std::size_t>(consumed, 1);
  }
  return out;
}

// Maps an offset through ordered, non-overlapping span rewrites. Offsets
// inside a rewritten span snap to its start, or its end when `is_end`.
std::size_t Remap(std::size_t pos, const std::vector<std::pair<Span, Span>> &rewrites,
                  bool is_end) {
  std::ptrdiff_t shift = 0;
  for (const auto &[from, to] : rewrites) {
    if (pos <= from.begin) break;
    if (pos >= from.end) {
      shift = static_cast<std::ptrdiff_t>(to.end) - static_cast<std::ptrdiff_t>(from.end);
      continue;
    }
    return is_end ? to.end : to.begin;
  }
  return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(pos) + shift);
}

std::vector<Span> RemapSpans(const std::vector<Span> &spans,
                             const std::vector<std::pair<Span, Span>> &rewrites) {
  std::vector<Span> out;
  out.reserve(spans.size());
  for (const Span &s : spans) {
    out.push_back({Remap(s.begin, rewrites, false), Remap(s.end, rewrites, true)});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ConceptDictionary

std::string SurfaceKey(std::string_view surface) {
  std::string key;
  for (const Token &t : Tokenize(surface)) {
    if (!key.empty()) key += ' ';
    key += t.normalized;
  }
  return key;
}

ConceptDictionary ConceptDictionary::Load(const std::string &path,
                                          const GroupFilter &groups,
                                          std::vector<std::string> *warnings) {
  std::string contents = ReadFile(path);
  try {
    return Parse(contents, groups, warnings);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what(), e.location());
  }
}

ConceptDictionary ConceptDictionary::Parse(std::string_view contents,
                                           const GroupFilter &groups,
                                           std::vector<std::string> *warnings) {
  ConceptDictionary dict;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 4) {
      throw ParseError(LineError(line_no, "expected 4 tab-separated fields, got " +
                                              std::to_string(fields.size())),
                       line_no);
    }
    std::string id(Trim(fields[0]));
    std::string canonical = NormalizeNfc(Trim(fields[1]));
    std::string synonym = NormalizeNfc(Trim(fields[2]));
    std::string group(Trim(fields[3]));
    if (id.empty() || canonical.empty() || group.empty()) {
      throw ParseError(LineError(line_no, "empty concept id, name or group"), line_no);
    }
    if (SurfaceKey(canonical).empty()) {
      throw ParseError(LineError(line_no, "canonical name has no word characters"), line_no);
    }
    if (groups && !groups->contains(group)) continue;

    const ConceptEntry *existing = dict.Find(id);
    if (existing && existing->semantic_group != group && warnings) {
      warnings->push_back(LineError(line_no, "concept " + id + " already in group " +
                                                 existing->semantic_group));
    }
    const std::string *owner = dict.Lookup(SurfaceKey(canonical));
    if (!owner || *owner != id) {
      std::string warning;
      if (!dict.Add(id, canonical, canonical, group, &warning) && warnings) {
        warnings->push_back(LineError(line_no, warning));
      }
    }
    if (!synonym.empty() && SurfaceKey(synonym) != SurfaceKey(canonical)) {
      std::string warning;
      if (!dict.Add(id, canonical, synonym, group, &warning) && warnings) {
        warnings->push_back(LineError(line_no, warning));
      }
    }
  }
  return dict;
}

bool ConceptDictionary::Add(const std::string &id, const std::string &canonical,
                            const std::string &surface, const std::string &group,
                            std::string *warning) {
  std::string key = SurfaceKey(surface);
  if (key.empty()) {
    if (warning) *warning = "surface '" + surface + "' has no word characters";
    return false;
  }
  auto [it, inserted] = surfaces_.emplace(key, id);
  if (!inserted) {
    if (warning) {
      *warning = it->second == id
                     ? "duplicate synonym '" + surface + "' for " + id
                     : "surface '" + surface + "' already assigned to " + it->second;
    }
    return false;
  }
  auto [entry, created] = entries_.try_emplace(id);
  if (created) {
    entry->second.id = id;
    entry->second.canonical_name = canonical;
    entry->second.semantic_group = group;
  }
  entry->second.synonyms.push_back(surface);
  max_tokens_ = std::max<std::size_t>(max_tokens_, std::count(key.begin(), key.end(), ' ') + 1);
  return true;
}

const ConceptEntry *ConceptDictionary::Find(std::string_view id) const {
  auto it = entries_.find(std::string(id));
  return it == entries_.end() ? nullptr : &it->second;
}

const std::string *ConceptDictionary::Lookup(const std::string &key) const {
  auto it = surfaces_.find(key);
  return it == surfaces_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Recognition and tagging

std::string_view MentionViaName(MentionVia via) {
  return via == MentionVia::kDictionary ? "dictionary" : "abbreviation_link";
}

std::vector<ConceptMention> Recognize(std::string_view text,
                                      const ConceptDictionary &dict) {
  std::vector<ConceptMention> mentions;
  if (dict.max_tokens() == 0) return mentions;
  std::vector<Token> tokens = Tokenize(text);
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t run = RunLength(text, tokens, i, dict.max_tokens());
    std::size_t consumed = 1;
    for (std::size_t n = run; n >= 1; --n) {
      if (const std::string *id = dict.Lookup(JoinKey(tokens, i, n, true))) {
        Span span{tokens[i].span.begin, tokens[i + n - 1].span.end};
        mentions.push_back({*id, span, std::string(text.substr(span.begin, span.length())),
                            MentionVia::kDictionary});
        consumed = n;
        break;
      }
    }
    i += consumed;
  }
  return mentions;
}

std::vector<ConceptTag> TitleTags(const AbstractRecord &record,
                                  const ConceptDictionary &dict,
                                  const std::vector<AbbrevPair> &abbrevs) {
  std::vector<ConceptTag> tags;
  for (const ConceptMention &m : Recognize(record.title, dict)) {
    bool seen = std::any_of(tags.begin(), tags.end(),
                            [&](const ConceptTag &t) { return t.concept_id == m.concept_id; });
    if (!seen) tags.push_back({tags.size() + 1, m.concept_id, {}});
  }
  for (const AbbrevPair &pair : abbrevs) {
    bool linked = false;
    for (const ConceptTag &t : tags) {
      linked = linked || std::find(t.short_forms.begin(), t.short_forms.end(),
                                   pair.short_form) != t.short_forms.end();
    }
    if (linked) continue;
    std::string_view long_form = Trim(pair.long_form);
    std::vector<ConceptMention> mentions = Recognize(long_form, dict);
    if (mentions.empty() || mentions.back().span.end != long_form.size()) continue;
    for (ConceptTag &t : tags) {
      if (t.concept_id == mentions.back().concept_id) {
        t.short_forms.push_back(pair.short_form);
        break;
      }
    }
  }
  return tags;
}

// ---------------------------------------------------------------------------
// Normalization

nlohmann::json TagAuditToJson(const TagAudit &audit) {
  nlohmann::json j;
  j["pmid"] = audit.pmid;
  j["field"] = audit.section ? "section" : "title";
  j["section"] = audit.section ? nlohmann::json(*audit.section) : nlohmann::json(nullptr);
  j["original"] = {audit.original.begin, audit.original.end};
  j["output"] = {audit.output.begin, audit.output.end};
  j["surface"] = audit.surface;
  j["tag"] = audit.tag;
  j["concept_id"] = audit.concept_id;
  j["via"] = std::string(MentionViaName(audit.via));
  return j;
}

TagAudit TagAuditFromJson(const nlohmann::json &j) {
  try {
    TagAudit audit;
    audit.pmid = j.at("pmid").get<std::string>();
    if (!j.at("section").is_null()) audit.section = j.at("section").get<std::size_t>();
    audit.original = {j.at("original").at(0).get<std::size_t>(),
                      j.at("original").at(1).get<std::size_t>()};
    audit.output = {j.at("output").at(0).get<std::size_t>(),
                    j.at("output").at(1).get<std::size_t>()};
    audit.surface = j.at("surface").get<std::string>();
    audit.tag = j.at("tag").get<std::string>();
    audit.concept_id = j.at("concept_id").get<std::string>();
    audit.via = j.at("via").get<std::string>() == "dictionary" ? MentionVia::kDictionary
                                                              : MentionVia::kAbbreviationLink;
    return audit;
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("bad audit entry: ") + e.what());
  }
}

NormalizeResult Normalize(const AbstractRecord &record,
                          const std::vector<ConceptTag> &tags,
                          const ConceptDictionary &dict) {
  NormalizeResult result{record, {}};
  if (tags.empty()) return result;

  std::map<std::string, const ConceptTag *> by_concept;
  std::map<std::string, const ConceptTag *> by_short_form;
  std::size_t short_form_tokens = 0;
  for (const ConceptTag &t : tags) {
    by_concept.emplace(t.concept_id, &t);
    for (const std::string &sf : t.short_forms) {
      std::string key;
      std::size_t n = 0;
      for (const Token &token : Tokenize(sf)) {
        if (n++ > 0) key += ' ';
        key += token.surface;
      }
      if (n == 0) continue;
      by_short_form.emplace(key, &t);
      short_form_tokens = std::max(short_form_tokens, n);
    }
  }

  auto rewrite = [&](std::string *text, std::vector<Span> *spans,
                     std::optional<std::size_t> section) {
    std::vector<Replacement> found =
        FindReplacements(*text, dict, by_concept, by_short_form, short_form_tokens);
    if (found.empty()) return;
    std::string out;
    std::vector<std::pair<Span, Span>> rewrites;
    std::size_t copied = 0;
    for (const Replacement &r : found) {
      out.append(*text, copied, r.span.begin - copied);
      std::string name = r.tag->Name();
      Span output{out.size(), out.size() + name.size()};
      out += name;
      copied = r.span.end;
      rewrites.emplace_back(r.span, output);
      result.audit.push_back({record.pmid, section, r.span, output,
                              text->substr(r.span.begin, r.span.length()), name,
                              r.tag->concept_id, r.via});
    }
    out.append(*text, copied);
    *text = std::move(out);
    if (spans) *spans = RemapSpans(*spans, rewrites);
  };

  rewrite(&result.record.title, nullptr, std::nullopt);
  for (std::size_t i = 0; i < result.record.sections.size(); ++i) {
    Section &s = result.record.sections[i];
    rewrite(&s.text, &s.sentence_spans, i);
  }
  return result;
}

NormalizeResult NormalizeRecord(const AbstractRecord &record,
                                const ConceptDictionary &dict) {
  std::vector<ConceptTag> tags = TitleTags(record, dict, ExtractAbbreviations(record));
  return Normalize(record, tags, dict);
}

AbstractRecord StripTags(const AbstractRecord &normalized,
                         const std::vector<TagAudit> &audit) {
  AbstractRecord out = normalized;
  auto restore = [&](std::string *text, std::vector<Span> *spans,
                     std::optional<std::size_t> section) {
    std::vector<const TagAudit *> entries;
    for (const TagAudit &a : audit) {
      if (a.pmid == normalized.pmid && a.section == section) entries.push_back(&a);
    }
    if (entries.empty()) return;
    std::sort(entries.begin(), entries.end(), [](const TagAudit *a, const TagAudit *b) {
      return a->output.begin < b->output.begin;
    });
    std::string restored;
    std::vector<std::pair<Span, Span>> rewrites;
    std::size_t copied = 0;
    for (const TagAudit *a : entries) {
      if (a->output.begin < copied || a->output.end > text->size() ||
          text->compare(a->output.begin, a->output.length(), a->tag) != 0) {
        throw ValidationError("audit entry for " + a->pmid + " does not match the text");
      }
      restored.append(*text, copied, a->output.begin - copied);
      Span original{restored.size(), restored.size() + a->surface.size()};
      restored += a->surface;
      copied = a->output.end;
      rewrites.emplace_back(a->output, original);
    }
    restored.append(*text, copied);
    *text = std::move(restored);
    if (spans) *spans = RemapSpans(*spans, rewrites);
  };
  restore(&out.title, nullptr, std::nullopt);
  for (std::size_t i = 0; i < out.sections.size(); ++i) {
    restore(&out.sections[i].text, &out.sections[i].sentence_spans, i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// External annotations

std::vector<ExternalAnnotation> ParseExternalAnnotations(std::string_view contents) {
  std::vector<ExternalAnnotation> out;
  std::size_t line_no = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      ExternalAnnotation a;
      const nlohmann::json &pmid = j.at("pmid");
      a.pmid = pmid.is_string() ? pmid.get<std::string>() : pmid.dump();
      a.start = j.at("start").get<std::size_t>();
      a.end = j.at("end").get<std::size_t>();
      a.concept_id = j.at("concept_id").get<std::string>();
      a.semantic_group = j.at("semantic_group").get<std::string>();
      if (a.start >= a.end) throw ValidationError("empty span");
      out.push_back(std::move(a));
    } catch (const std::exception &e) {
      throw ParseError(LineError(line_no, e.what()), line_no);
    }
  }
  return out;
}

std::string AnnotationText(const AbstractRecord &record) {
  std::string text = record.title;
  for (const Section &s : record.sections) {
    text += '\n';
    text += s.text;
  }
  return text;
}

ConceptDictionary WithAnnotations(const ConceptDictionary &base,
                                  const AbstractRecord &record,
                                  const std::vector<ExternalAnnotation> &annotations,
                                  const GroupFilter &groups) {
  std::string text = AnnotationText(record);
  std::vector<std::size_t> field_ends{record.title.size()};
  for (const Section &s : record.sections) field_ends.push_back(field_ends.back() + 1 + s.text.size());

  ConceptDictionary local;
  for (const ExternalAnnotation &a : annotations) {
    if (a.pmid != record.pmid) continue;
    if (groups && !groups->contains(a.semantic_group)) continue;
    auto field = std::lower_bound(field_ends.begin(), field_ends.end(), a.start + 1);
    if (a.end > text.size() || field == field_ends.end() || a.end > *field) {
      throw ValidationError("annotation " + a.concept_id + " [" + std::to_string(a.start) +
                            "," + std::to_string(a.end) + ") of " + a.pmid +
                            " is out of range or crosses a field boundary");
    }
    std::string surface = text.substr(a.start, a.end - a.start);
    const ConceptEntry *known = base.Find(a.concept_id);
    local.Add(a.concept_id, known ? known->canonical_name : surface, surface,
              a.semantic_group);
  }
  for (const auto &[id, entry] : base.entries()) {
    for (const std::string &surface : entry.synonyms) {
      local.Add(id, entry.canonical_name, surface, entry.semantic_group);
    }
  }
  return local;
}

}  // namespace effcorp
