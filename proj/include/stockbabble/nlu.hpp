#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stockbabble::nlu {

// Declaration order is also the tie-break order when two intents score equally.
enum class Intent {
  StockInformation,
  CompanyProfile,
  News,
  Recommendation,
  TradingTerm,
  PortfolioAdd,
  PortfolioRemove,
  PortfolioShow,
  Greeting,
  Help,
  Fallback,
};

inline constexpr std::array<Intent, 10> kClassifiableIntents{
    Intent::StockInformation, Intent::CompanyProfile,  Intent::News,
    Intent::Recommendation,   Intent::TradingTerm,     Intent::PortfolioAdd,
    Intent::PortfolioRemove,  Intent::PortfolioShow,   Intent::Greeting,
    Intent::Help};

std::string_view to_string(Intent intent) noexcept;
std::optional<Intent> intent_from_string(std::string_view name) noexcept;

struct Utterance {
  std::string raw;
  std::string normalized;  // lowercase, punctuation stripped, single spaces
  std::vector<std::string> tokens;
};

// Lowercases ASCII, deletes apostrophes, turns other punctuation into spaces
// and collapses whitespace. Throws Error(EmptyUtterance) when nothing is left.
Utterance normalize(std::string_view raw);

// Same rules, without the emptiness check. Used for aliases and templates.
std::string normalize_text(std::string_view raw);

enum class EntityKind { Company, Term, ShareQuantity };

std::string_view to_string(EntityKind kind) noexcept;
std::string_view slot_name(EntityKind kind) noexcept;  // "company", "term", "quantity"

struct TokenSpan {
  std::size_t begin = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  bool overlaps(const TokenSpan& other) const noexcept {
    return begin < other.end && other.begin < end;
  }
  bool operator==(const TokenSpan&) const = default;
};

struct EntityMatch {
  EntityKind kind = EntityKind::Company;
  std::string surface;   // matched tokens joined by spaces
  std::string resolved;  // ticker, glossary key, or decimal share count
  std::string display;   // human name: "Facebook", "Relative Strength Index", "10"
  TokenSpan span;

  // Share count for ShareQuantity matches.
  std::int64_t quantity() const;

  bool operator==(const EntityMatch&) const = default;
};

struct IntentMatch {
  Intent intent = Intent::Fallback;
  std::vector<EntityMatch> entities;
  double confidence = 0;

  // First entity of the given kind, if any.
  const EntityMatch* first(EntityKind kind) const noexcept;
};

struct Template {
  std::string text;                 // as written, e.g. "what is the price of {company}"
  std::vector<std::string> tokens;  // slots kept as "{company}"
};

// Phrase templates per intent plus entity dictionaries. Immutable once handed
// to the classifier; the add_* methods are for assembly only.
class Corpus {
 public:
  static constexpr double kDefaultThreshold = 0.55;

  // Reads the JSON corpus document. Throws Error(MalformedCorpus).
  static Corpus load(const std::filesystem::path& path);
  static Corpus parse(std::string_view json_text, std::string_view source = "corpus");

  // Registers `alias` for an entity. Returns false, leaving the dictionary
  // unchanged, when the alias already resolves to something else.
  bool add_alias(EntityKind kind, std::string_view alias, std::string_view resolved,
                 std::string_view display);

  void add_template(Intent intent, std::string_view text);

  double threshold() const noexcept { return threshold_; }
  void set_threshold(double threshold) noexcept { threshold_ = threshold; }

  const std::vector<Template>& templates(Intent intent) const;
  const std::map<Intent, std::vector<Template>>& all_templates() const noexcept {
    return templates_;
  }

  struct DictionaryEntry {
    EntityKind kind;
    std::string resolved;
    std::string display;
  };
  const std::map<std::vector<std::string>, DictionaryEntry>& dictionary() const noexcept {
    return dictionary_;
  }
  std::size_t longest_alias() const noexcept { return longest_alias_; }

  // Display name for a ticker, if any alias resolves to it.
  std::optional<std::string> company_name(std::string_view ticker) const;

  // Checks the structural rules: >= 3 templates per intent, known slots only,
  // no two intents sharing a template token set. Throws Error(MalformedCorpus).
  void validate() const;

 private:
  double threshold_ = kDefaultThreshold;
  std::map<Intent, std::vector<Template>> templates_;
  std::map<std::vector<std::string>, DictionaryEntry> dictionary_;
  std::map<std::string, std::string, std::less<>> company_names_;
  std::size_t longest_alias_ = 0;
};

// Longest match first, left to right, non-overlapping. Integers next to
// "share"/"shares" become ShareQuantity. A company alias followed by a bare
// "s" (possessive with the apostrophe removed) still matches.
std::vector<EntityMatch> extract_entities(const Utterance& utterance, const Corpus& corpus);

// Utterance tokens with every entity span replaced by its slot token.
std::vector<std::string> abstract_tokens(const Utterance& utterance,
                                         const std::vector<EntityMatch>& entities);

// Token-set F1 between two token lists.
double token_set_f1(const std::vector<std::string>& a, const std::vector<std::string>& b);

IntentMatch classify(const Utterance& utterance, const Corpus& corpus);

// Follow-up prompts for the intent, with the first company (or term) name
// substituted. Intents needing a company fall back to starter prompts when none
// is given.
std::vector<std::string> suggestions(Intent intent, const std::vector<EntityMatch>& entities);

}  // namespace stockbabble::nlu
