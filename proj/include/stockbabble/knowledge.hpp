#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stockbabble {

struct TermEntry {
  std::string key;  // canonical slug, e.g. "bull_market"
  std::string title;
  std::string definition;
  std::vector<std::string> aliases;
  std::vector<std::string> related;  // keys
  std::vector<std::string> tags;

  bool operator==(const TermEntry&) const = default;
};

// Trading-term glossary. Immutable after load.
class Glossary {
 public:
  // JSON array of entries. Throws Error(MalformedCorpus) on syntax errors,
  // dangling related keys, self references or duplicate aliases.
  static Glossary load(const std::filesystem::path& path);
  static Glossary parse(std::string_view json_text, std::string_view source = "glossary");

  // Accepts a key, the title or any alias; case and punctuation insensitive.
  // Throws Error(UnknownTerm).
  const TermEntry& lookup_term(std::string_view key_or_alias) const;

  // Entries for the related keys of `key`, in declared order, deduplicated.
  std::vector<TermEntry> related_terms(std::string_view key) const;

  const std::vector<TermEntry>& entries() const noexcept { return entries_; }

  // Every normalized alias with its key; includes keys and titles.
  const std::map<std::string, std::string, std::less<>>& alias_index() const noexcept {
    return alias_index_;
  }

  // Related links that are not mirrored by the target entry, as "a -> b".
  std::vector<std::string> one_way_links() const;

 private:
  std::vector<TermEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> by_key_;
  std::map<std::string, std::string, std::less<>> alias_index_;
};

}  // namespace stockbabble
