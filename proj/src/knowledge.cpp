#include "stockbabble/knowledge.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "stockbabble/error.hpp"
#include "stockbabble/nlu.hpp"

namespace stockbabble {
namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorCode::MalformedCorpus, message);
}

}  // namespace

Glossary Glossary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed(fmt::format("{}: cannot open glossary", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

Glossary Glossary::parse(std::string_view json_text, std::string_view source) {
  Glossary glossary;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    for (const auto& item : doc) {
      TermEntry entry;
      entry.key = item.at("key").get<std::string>();
      entry.title = item.at("title").get<std::string>();
      entry.definition = item.at("definition").get<std::string>();
      entry.aliases = item.value("aliases", std::vector<std::string>{});
      entry.related = item.value("related", std::vector<std::string>{});
      entry.tags = item.value("tags", std::vector<std::string>{});
      if (entry.key.empty() || entry.title.empty() || entry.definition.empty()) {
        malformed(fmt::format("{}: entry '{}' has an empty key, title or definition", source,
                              entry.key));
      }
      if (glossary.by_key_.count(entry.key)) {
        malformed(fmt::format("{}: duplicate key '{}'", source, entry.key));
      }
      glossary.by_key_.emplace(entry.key, glossary.entries_.size());
      glossary.entries_.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    malformed(fmt::format("{}: {}", source, e.what()));
  }

  for (const auto& entry : glossary.entries_) {
    for (const auto& rel : entry.related) {
      if (rel == entry.key) malformed(fmt::format("{}: '{}' relates to itself", source, rel));
      if (!glossary.by_key_.count(rel)) {
        malformed(fmt::format("{}: '{}' relates to unknown term '{}'", source, entry.key, rel));
      }
    }
    std::vector<std::string> names{entry.key, entry.title};
    names.insert(names.end(), entry.aliases.begin(), entry.aliases.end());
    for (const auto& name : names) {
      const auto normalized = nlu::normalize_text(name);
      if (normalized.empty()) continue;
      const auto [it, inserted] = glossary.alias_index_.emplace(normalized, entry.key);
      if (!inserted && it->second != entry.key) {
        malformed(fmt::format("{}: alias '{}' used by both '{}' and '{}'", source, name, it->second,
                              entry.key));
      }
    }
  }
  return glossary;
}

const TermEntry& Glossary::lookup_term(std::string_view key_or_alias) const {
  if (const auto it = by_key_.find(key_or_alias); it != by_key_.end()) {
    return entries_[it->second];
  }
  const auto normalized = nlu::normalize_text(key_or_alias);
  if (const auto it = alias_index_.find(normalized); it != alias_index_.end()) {
    return entries_[by_key_.at(it->second)];
  }
  throw Error(ErrorCode::UnknownTerm, fmt::format("no glossary entry for '{}'", key_or_alias));
}

std::vector<TermEntry> Glossary::related_terms(std::string_view key) const {
  const auto& entry = lookup_term(key);
  std::vector<TermEntry> out;
  std::set<std::string> seen;
  for (const auto& rel : entry.related) {
    if (seen.insert(rel).second) out.push_back(entries_[by_key_.at(rel)]);
  }
  return out;
}

std::vector<std::string> Glossary::one_way_links() const {
  std::vector<std::string> out;
  for (const auto& entry : entries_) {
    for (const auto& rel : entry.related) {
      const auto& back = entries_[by_key_.at(rel)].related;
      if (std::find(back.begin(), back.end(), entry.key) == back.end()) {
        out.push_back(fmt::format("{} -> {}", entry.key, rel));
      }
    }
  }
  return out;
}

}  // namespace stockbabble
