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

#include "effcorp/title_grammar.h"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "effcorp/error.h"
#include "effcorp/parallel.h"
#include "effcorp/text.h"
#include "effcorp/unicode.h"

namespace effcorp {

using nlohmann::json;

namespace {

bool OnlySpace(std::string_view text, std::size_t from, std::size_t to) {
  for (std::size_t pos = from; pos < to;) {
    if (!IsSpace(DecodeAt(text, pos, &pos))) return false;
  }
  return true;
}

// Offset of the first sentence-level stop (':' or a '.' followed by
// whitespace or the end) in [from, to), or npos.
std::size_t FindStop(std::string_view text, std::size_t from, std::size_t to) {
  for (std::size_t pos = from; pos < to; ++pos) {
    char c = text[pos];
    if (c == ':') return pos;
    if (c == '.') {
      if (pos + 1 >= text.size()) return pos;
      std::size_t ignored;
      if (IsSpace(DecodeAt(text, pos + 1, &ignored))) return pos;
    }
  }
  return std::string_view::npos;
}

// Drops trailing closing brackets that have no opening partner.
std::string_view StripUnmatchedClosers(std::string_view text) {
  int balance = 0;
  for (char c : text) {
    if (c == '(' || c == '[' || c == '{') ++balance;
    if (c == ')' || c == ']' || c == '}') --balance;
  }
  while (balance < 0 && !text.empty() &&
         (text.back() == ')' || text.back() == ']' || text.back() == '}')) {
    text.remove_suffix(1);
    text = Trim(text);
    ++balance;
  }
  return text;
}

std::optional<Preposition> AsPreposition(std::string_view word) {
  if (word == "on") return Preposition::kOn;
  if (word == "in") return Preposition::kIn;
  if (word == "for") return Preposition::kFor;
  return std::nullopt;
}

bool IsArticle(std::string_view word) {
  return word == "the" || word == "a" || word == "an";
}

// Completes X and Y for the phrase at tokens[i], tokens[i + 1].
bool ParseCatalystAndTarget(std::string_view title,
                            const std::vector<Token> &tokens, std::size_t i,
                            TitleParse *parse) {
  std::size_t of = i + 2;
  if (of >= tokens.size() || tokens[of].normalized != "of" ||
      !OnlySpace(title, tokens[i + 1].span.end, tokens[of].span.begin)) {
    return false;
  }
  std::size_t x_first = of + 1;
  for (std::size_t j = x_first; j < tokens.size(); ++j) {
    if (FindStop(title, tokens[j - 1].span.end, tokens[j].span.begin) !=
        std::string_view::npos) {
      return false;
    }
    auto prep = AsPreposition(tokens[j].normalized);
    if (!prep) continue;
    if (j == x_first || j + 1 >= tokens.size()) return false;
    std::size_t y_begin = tokens[j + 1].span.begin;
    if (FindStop(title, tokens[j].span.end, y_begin) != std::string_view::npos) {
      return false;
    }
    std::size_t y_end = FindStop(title, y_begin, title.size());
    if (y_end == std::string_view::npos) y_end = title.size();
    std::string_view x = Trim(title.substr(
        tokens[x_first].span.begin, tokens[j].span.begin - tokens[x_first].span.begin));
    std::string_view y = StripUnmatchedClosers(Trim(title.substr(y_begin, y_end - y_begin)));
    if (x.empty() || y.empty()) return false;
    parse->catalyst_x = std::string(x);
    parse->target_y = std::string(y);
    parse->preposition = prep;
    return true;
  }
  return false;
}

}  // namespace

std::string_view EffectWordName(EffectWord word) {
  switch (word) {
    case EffectWord::kEffect:
      return "effect";
    case EffectWord::kImpact:
      return "impact";
    case EffectWord::kInfluence:
      return "influence";
  }
  return "effect";
}

std::string_view PrepositionName(Preposition prep) {
  switch (prep) {
    case Preposition::kOn:
      return "on";
    case Preposition::kIn:
      return "in";
    case Preposition::kFor:
      return "for";
  }
  return "on";
}

std::optional<std::pair<Polarity, EffectWord>> MatchEffectBigram(
    std::string_view first, std::string_view second) {
  std::optional<Polarity> polarity;
  if (first == "positive") {
    polarity = Polarity::kPositive;
  } else if (first == "negative") {
    polarity = Polarity::kNegative;
  } else if (first == "no" || first == "neutral") {
    polarity = Polarity::kNeutral;
  }
  if (!polarity) return std::nullopt;
  for (EffectWord w : kAllEffectWords) {
    if (second == EffectWordName(w)) return std::make_pair(*polarity, w);
  }
  return std::nullopt;
}

std::size_t ContentStart(std::string_view title) {
  std::size_t pos = 0;
  while (pos < title.size()) {
    std::size_t next;
    char32_t c = DecodeAt(title, pos, &next);
    if (IsSpace(c) || IsQuote(c) || IsOpeningBracket(c)) {
      pos = next;
      continue;
    }
    auto tokens = Tokenize(title.substr(pos));
    if (tokens.empty() || tokens.front().span.begin != 0 ||
        !IsArticle(tokens.front().normalized)) {
      break;
    }
    std::size_t after = pos + tokens.front().span.end;
    if (after >= title.size()) break;
    std::size_t ignored;
    if (!IsSpace(DecodeAt(title, after, &ignored))) break;
    pos = after;
  }
  return pos;
}

std::optional<TitleParse> ParseTitle(std::string_view title) {
  std::vector<Token> tokens = Tokenize(title);
  std::optional<TitleParse> partial;
  std::size_t content_start = ContentStart(title);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    auto bigram = MatchEffectBigram(tokens[i].normalized, tokens[i + 1].normalized);
    if (!bigram) continue;
    if (!OnlySpace(title, tokens[i].span.end, tokens[i + 1].span.begin)) continue;
    TitleParse parse;
    parse.polarity = bigram->first;
    parse.effect_word = bigram->second;
    parse.match_start = tokens[i].span.begin;
    parse.match_end = tokens[i + 1].span.end;
    parse.at_start = parse.match_start == content_start;
    if (ParseCatalystAndTarget(title, tokens, i, &parse)) return parse;
    if (!partial) partial = std::move(parse);
  }
  return partial;
}

ExclusionLexicon ExclusionLexicon::Default() {
  return ExclusionLexicon({"and", "or", "but", "review", "study",
                           "meta-analysis", "meta analysis"});
}

ExclusionLexicon ExclusionLexicon::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file " + path);
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string_view entry = Trim(line);
    if (!entry.empty()) entries.emplace_back(entry);
  }
  if (entries.empty()) throw ValidationError("lexicon file " + path + " has no entries");
  return ExclusionLexicon(entries);
}

ExclusionLexicon::ExclusionLexicon(const std::vector<std::string> &entries) {
  for (const std::string &entry : entries) {
    std::vector<std::string> tokens = TokenStrings(entry);
    if (tokens.empty()) continue;
    entries_.push_back(FoldCase(Trim(entry)));
    token_entries_.push_back(std::move(tokens));
  }
  if (entries_.empty()) throw ValidationError("exclusion lexicon is empty");
}

std::optional<std::string> ExclusionLexicon::FindIn(std::string_view text) const {
  std::vector<std::string> tokens = TokenStrings(text);
  std::optional<std::string> best;
  std::size_t best_pos = tokens.size();
  for (std::size_t e = 0; e < token_entries_.size(); ++e) {
    const auto &entry = token_entries_[e];
    for (std::size_t i = 0; i + entry.size() <= tokens.size() && i < best_pos; ++i) {
      if (std::equal(entry.begin(), entry.end(), tokens.begin() + static_cast<long>(i))) {
        best = entries_[e];
        best_pos = i;
        break;
      }
    }
  }
  return best;
}

std::string_view FilterStageName(FilterStage stage) {
  switch (stage) {
    case FilterStage::kNone:
      return "none";
    case FilterStage::kStage1:
      return "stage1";
    case FilterStage::kStage2:
      return "stage2";
    case FilterStage::kStage3:
      return "stage3";
  }
  return "none";
}

std::string_view RejectionReasonName(RejectionReason reason) {
  switch (reason) {
    case RejectionReason::kNoEffectPhrase:
      return "no_effect_phrase";
    case RejectionReason::kExclusionWord:
      return "exclusion_word";
    case RejectionReason::kNotAtStart:
      return "not_at_start";
    case RejectionReason::kNoXyParse:
      return "no_xy_parse";
  }
  return "no_effect_phrase";
}

FilterDecision ClassifyStage(std::string_view title,
                             const ExclusionLexicon &lexicon) {
  FilterDecision decision;
  decision.parse = ParseTitle(title);
  if (!decision.parse) {
    decision.rejection_reason = RejectionReason::kNoEffectPhrase;
    return decision;
  }
  decision.stage_reached = FilterStage::kStage1;
  if (auto word = lexicon.FindIn(title)) {
    decision.rejection_reason = RejectionReason::kExclusionWord;
    decision.exclusion_word = std::move(word);
    return decision;
  }
  decision.stage_reached = FilterStage::kStage2;
  if (!decision.parse->at_start) {
    decision.rejection_reason = RejectionReason::kNotAtStart;
  } else if (!decision.parse->full()) {
    decision.rejection_reason = RejectionReason::kNoXyParse;
  } else {
    decision.stage_reached = FilterStage::kStage3;
  }
  return decision;
}

FilterResult FilterCorpus(const std::vector<AbstractRecord> &records,
                          FilterStage target, const ExclusionLexicon &lexicon,
                          unsigned jobs) {
  std::vector<FilterDecision> decisions(records.size());
  ParallelFor(records.size(), jobs, [&](std::size_t i) {
    decisions[i] = ClassifyStage(records[i].title, lexicon);
  });
  FilterResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (decisions[i].stage_reached >= target) result.kept.push_back(records[i]);
    result.audit.push_back({records[i].pmid, std::move(decisions[i])});
  }
  return result;
}

json FilterAuditToJson(const FilterAudit &audit) {
  const FilterDecision &d = audit.decision;
  json out = {{"pmid", audit.pmid},
              {"stage_reached", FilterStageName(d.stage_reached)}};
  out["rejection_reason"] =
      d.rejection_reason ? json(RejectionReasonName(*d.rejection_reason)) : json(nullptr);
  out["exclusion_word"] = d.exclusion_word ? json(*d.exclusion_word) : json(nullptr);
  if (d.parse) {
    const TitleParse &p = *d.parse;
    json parse = {{"polarity", PolarityName(p.polarity)},
                  {"effect_word", EffectWordName(p.effect_word)},
                  {"match_start", p.match_start},
                  {"at_start", p.at_start}};
    if (p.full()) {
      parse["catalyst_x"] = p.catalyst_x;
      parse["target_y"] = p.target_y;
      parse["preposition"] = PrepositionName(*p.preposition);
    } else {
      parse["catalyst_x"] = nullptr;
      parse["target_y"] = nullptr;
      parse["preposition"] = nullptr;
    }
    out["parse"] = std::move(parse);
  } else {
    out["parse"] = nullptr;
  }
  return out;
}

std::size_t CountTable::Cell(FilterStage stage, Polarity p, EffectWord w) const {
  return counts[static_cast<std::size_t>(stage) - 1][static_cast<std::size_t>(p)]
               [static_cast<std::size_t>(w)];
}

std::size_t CountTable::RowTotal(FilterStage stage, Polarity p) const {
  std::size_t total = 0;
  for (EffectWord w : kAllEffectWords) total += Cell(stage, p, w);
  return total;
}

std::size_t CountTable::ColumnTotal(FilterStage stage, EffectWord w) const {
  std::size_t total = 0;
  for (Polarity p : kAllPolarities) total += Cell(stage, p, w);
  return total;
}

std::size_t CountTable::GrandTotal(FilterStage stage) const {
  std::size_t total = 0;
  for (Polarity p : kAllPolarities) total += RowTotal(stage, p);
  return total;
}

namespace {

constexpr FilterStage kTableStages[] = {FilterStage::kStage1, FilterStage::kStage2,
                                        FilterStage::kStage3};

std::string_view StageCaption(FilterStage stage) {
  switch (stage) {
    case FilterStage::kStage1:
      return "effect phrase anywhere in the title";
    case FilterStage::kStage2:
      return "without exclusion-lexicon words in the title";
    default:
      return "effect phrase at the beginning of the title";
  }
}

std::string_view RowName(Polarity p) {
  switch (p) {
    case Polarity::kPositive:
      return "Positive";
    case Polarity::kNegative:
      return "Negative";
    case Polarity::kNeutral:
      return "No";
  }
  return "No";
}

}  // namespace

std::string CountTable::ToText() const {
  std::ostringstream out;
  for (FilterStage stage : kTableStages) {
    out << "Stage " << static_cast<int>(stage) << ": " << StageCaption(stage) << "\n";
    out << std::left << std::setw(22) << "Pattern in the title" << std::right
        << std::setw(12) << "Effect of" << std::setw(12) << "Impact of"
        << std::setw(15) << "Influence of" << std::setw(8) << "Total" << "\n";
    for (Polarity p : kAllPolarities) {
      out << std::left << std::setw(22) << RowName(p) << std::right;
      out << std::setw(12) << Cell(stage, p, EffectWord::kEffect)
          << std::setw(12) << Cell(stage, p, EffectWord::kImpact)
          << std::setw(15) << Cell(stage, p, EffectWord::kInfluence)
          << std::setw(8) << RowTotal(stage, p) << "\n";
    }
    out << std::left << std::setw(22) << "Total" << std::right
        << std::setw(12) << ColumnTotal(stage, EffectWord::kEffect)
        << std::setw(12) << ColumnTotal(stage, EffectWord::kImpact)
        << std::setw(15) << ColumnTotal(stage, EffectWord::kInfluence)
        << std::setw(8) << GrandTotal(stage) << "\n";
    if (stage != FilterStage::kStage3) out << "\n";
  }
  return out.str();
}

json CountTable::ToJson() const {
  json stages = json::array();
  for (FilterStage stage : kTableStages) {
    json rows = json::object();
    for (Polarity p : kAllPolarities) {
      json row = json::object();
      for (EffectWord w : kAllEffectWords) row[EffectWordName(w)] = Cell(stage, p, w);
      row["total"] = RowTotal(stage, p);
      rows[PolarityName(p)] = std::move(row);
    }
    json totals = json::object();
    for (EffectWord w : kAllEffectWords) totals[EffectWordName(w)] = ColumnTotal(stage, w);
    totals["total"] = GrandTotal(stage);
    rows["total"] = std::move(totals);
    stages.push_back({{"stage", FilterStageName(stage)},
                      {"description", StageCaption(stage)},
                      {"counts", std::move(rows)}});
  }
  return {{"stages", std::move(stages)}};
}

CountTable Tabulate(const std::vector<AbstractRecord> &records,
                    const ExclusionLexicon &lexicon) {
  CountTable table;
  for (const AbstractRecord &record : records) {
    FilterDecision d = ClassifyStage(record.title, lexicon);
    if (!d.parse) continue;
    auto p = static_cast<std::size_t>(d.parse->polarity);
    auto w = static_cast<std::size_t>(d.parse->effect_word);
    for (int s = 1; s <= static_cast<int>(d.stage_reached); ++s) {
      ++table.counts[static_cast<std::size_t>(s - 1)][p][w];
    }
  }
  return table;
}

}  // namespace effcorp
