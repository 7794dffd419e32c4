#include "stockbabble/nlu.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "stockbabble/error.hpp"

namespace stockbabble::nlu {
namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorCode::MalformedCorpus, message);
}

std::vector<std::string> split_spaces(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto next = text.find(' ', pos);
    const auto end = next == std::string_view::npos ? text.size() : next;
    if (end > pos) tokens.emplace_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return tokens;
}

std::string join(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::optional<EntityKind> slot_kind(std::string_view name) {
  for (const auto kind : {EntityKind::Company, EntityKind::Term, EntityKind::ShareQuantity}) {
    if (slot_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string slot_token(EntityKind kind) { return fmt::format("{{{}}}", slot_name(kind)); }

std::optional<std::int64_t> positive_integer(std::string_view token) {
  if (token.empty() || token.size() > 12) return std::nullopt;
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value <= 0) return std::nullopt;
  return value;
}

bool is_share_word(std::string_view token) { return token == "share" || token == "shares"; }

Template make_template(std::string_view text) {
  Template t;
  t.text = std::string(text);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('{', pos);
    const auto literal = text.substr(pos, open == std::string_view::npos ? open : open - pos);
    for (auto& token : split_spaces(normalize_text(literal))) t.tokens.push_back(std::move(token));
    if (open == std::string_view::npos) break;
    const auto close = text.find('}', open);
    if (close == std::string_view::npos) malformed(fmt::format("unclosed slot in '{}'", text));
    const auto name = text.substr(open + 1, close - open - 1);
    const auto kind = slot_kind(name);
    if (!kind) malformed(fmt::format("unknown slot '{{{}}}' in '{}'", name, text));
    t.tokens.push_back(slot_token(*kind));
    pos = close + 1;
  }
  if (t.tokens.empty()) malformed("empty template");
  return t;
}

}  // namespace

std::string_view to_string(Intent intent) noexcept {
  switch (intent) {
    case Intent::StockInformation: return "StockInformation";
    case Intent::CompanyProfile: return "CompanyProfile";
    case Intent::News: return "News";
    case Intent::Recommendation: return "Recommendation";
    case Intent::TradingTerm: return "TradingTerm";
    case Intent::PortfolioAdd: return "PortfolioAdd";
    case Intent::PortfolioRemove: return "PortfolioRemove";
    case Intent::PortfolioShow: return "PortfolioShow";
    case Intent::Greeting: return "Greeting";
    case Intent::Help: return "Help";
    case Intent::Fallback: return "Fallback";
  }
  return "?";
}

std::optional<Intent> intent_from_string(std::string_view name) noexcept {
  for (const auto intent : kClassifiableIntents) {
    if (to_string(intent) == name) return intent;
  }
  if (name == "Fallback") return Intent::Fallback;
  return std::nullopt;
}

std::string_view to_string(EntityKind kind) noexcept {
  switch (kind) {
    case EntityKind::Company: return "Company";
    case EntityKind::Term: return "Term";
    case EntityKind::ShareQuantity: return "ShareQuantity";
  }
  return "?";
}

std::string_view slot_name(EntityKind kind) noexcept {
  switch (kind) {
    case EntityKind::Company: return "company";
    case EntityKind::Term: return "term";
    case EntityKind::ShareQuantity: return "quantity";
  }
  return "?";
}

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    // U+2019 RIGHT SINGLE QUOTATION MARK is an apostrophe too.
    if (c == 0xE2 && i + 2 < raw.size() && static_cast<unsigned char>(raw[i + 1]) == 0x80 &&
        static_cast<unsigned char>(raw[i + 2]) == 0x99) {
      i += 2;
      continue;
    }
    if (c == '\'' || c == '`') continue;
    if (c >= 0x80 || std::isalnum(c)) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    } else {
      pending_space = true;
    }
  }
  return out;
}

Utterance normalize(std::string_view raw) {
  Utterance u;
  u.raw = std::string(raw);
  u.normalized = normalize_text(raw);
  if (u.normalized.empty()) throw Error(ErrorCode::EmptyUtterance, "the message is empty");
  u.tokens = split_spaces(u.normalized);
  return u;
}

std::int64_t EntityMatch::quantity() const {
  const auto value = positive_integer(resolved);
  if (kind != EntityKind::ShareQuantity || !value) {
    throw Error(ErrorCode::InvalidQuantity, fmt::format("'{}' is not a share quantity", surface));
  }
  return *value;
}

const EntityMatch* IntentMatch::first(EntityKind kind) const noexcept {
  for (const auto& e : entities) {
    if (e.kind == kind) return &e;
  }
  return nullptr;
}

Corpus Corpus::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed(fmt::format("{}: cannot open corpus", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

Corpus Corpus::parse(std::string_view json_text, std::string_view source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(fmt::format("{}: invalid JSON: {}", source, e.what()));
  }
  Corpus corpus;
  try {
    if (doc.contains("threshold")) {
      const double t = doc.at("threshold").get<double>();
      if (!(t > 0 && t <= 1)) malformed(fmt::format("{}: threshold must be in (0, 1]", source));
      corpus.threshold_ = t;
    }
    for (const auto& [name, phrases] : doc.at("intents").items()) {
      const auto intent = intent_from_string(name);
      if (!intent || *intent == Intent::Fallback) {
        malformed(fmt::format("{}: unknown intent '{}'", source, name));
      }
      for (const auto& phrase : phrases) corpus.add_template(*intent, phrase.get<std::string>());
    }
    if (doc.contains("companies")) {
      for (const auto& company : doc.at("companies")) {
        const auto ticker = company.at("ticker").get<std::string>();
        const auto name = company.at("name").get<std::string>();
        std::vector<std::string> aliases{name, ticker};
        for (const auto& alias : company.value("aliases", nlohmann::json::array())) {
          aliases.push_back(alias.get<std::string>());
        }
        for (const auto& alias : aliases) {
          if (!corpus.add_alias(EntityKind::Company, alias, ticker, name)) {
            malformed(fmt::format("{}: alias '{}' of {} is already taken", source, alias, ticker));
          }
        }
      }
    }
    if (doc.contains("terms")) {
      for (const auto& term : doc.at("terms")) {
        const auto key = term.at("key").get<std::string>();
        const auto display = term.value("title", key);
        for (const auto& alias : term.at("aliases")) {
          if (!corpus.add_alias(EntityKind::Term, alias.get<std::string>(), key, display)) {
            malformed(fmt::format("{}: term alias '{}' is already taken", source,
                                  alias.get<std::string>()));
          }
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    malformed(fmt::format("{}: {}", source, e.what()));
  }
  return corpus;
}

bool Corpus::add_alias(EntityKind kind, std::string_view alias, std::string_view resolved,
                       std::string_view display) {
  auto key = split_spaces(normalize_text(alias));
  if (key.empty()) return false;
  const auto it = dictionary_.find(key);
  if (it != dictionary_.end()) {
    return it->second.kind == kind && it->second.resolved == resolved;
  }
  longest_alias_ = std::max(longest_alias_, key.size());
  dictionary_.emplace(std::move(key),
                      DictionaryEntry{kind, std::string(resolved), std::string(display)});
  if (kind == EntityKind::Company && !company_names_.count(resolved)) {
    company_names_.emplace(std::string(resolved), std::string(display));
  }
  return true;
}

void Corpus::add_template(Intent intent, std::string_view text) {
  if (intent == Intent::Fallback) malformed("Fallback cannot have templates");
  templates_[intent].push_back(make_template(text));
}

const std::vector<Template>& Corpus::templates(Intent intent) const {
  static const std::vector<Template> kNone;
  const auto it = templates_.find(intent);
  return it == templates_.end() ? kNone : it->second;
}

std::optional<std::string> Corpus::company_name(std::string_view ticker) const {
  const auto it = company_names_.find(ticker);
  if (it == company_names_.end()) return std::nullopt;
  return it->second;
}

void Corpus::validate() const {
  std::map<std::set<std::string>, Intent> owners;
  for (const auto intent : kClassifiableIntents) {
    const auto& list = templates(intent);
    if (list.size() < 3) {
      malformed(fmt::format("intent {} has {} templates, need at least 3", to_string(intent),
                            list.size()));
    }
    for (const auto& t : list) {
      const std::set<std::string> key(t.tokens.begin(), t.tokens.end());
      const auto [it, inserted] = owners.emplace(key, intent);
      if (!inserted && it->second != intent) {
        malformed(fmt::format("template '{}' of {} has the same words as one of {}", t.text,
                              to_string(intent), to_string(it->second)));
      }
    }
  }
}

std::vector<EntityMatch> extract_entities(const Utterance& utterance, const Corpus& corpus) {
  const auto& tokens = utterance.tokens;
  const auto& dictionary = corpus.dictionary();
  std::vector<EntityMatch> matches;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::size_t max_len = std::min(corpus.longest_alias(), tokens.size() - i);
    bool matched = false;
    for (std::size_t len = max_len; len >= 1; --len) {
      const std::vector<std::string> key(tokens.begin() + static_cast<long>(i),
                                         tokens.begin() + static_cast<long>(i + len));
      auto it = dictionary.find(key);
      if (it == dictionary.end()) {
        // Possessive company names lose their apostrophe: "apples ceo".
        auto stem = key;
        auto& last = stem.back();
        if (last.size() < 2 || last.back() != 's') continue;
        last.pop_back();
        it = dictionary.find(stem);
        if (it == dictionary.end() || it->second.kind != EntityKind::Company) continue;
      }
      matches.push_back(EntityMatch{it->second.kind, join(tokens, i, i + len),
                                    it->second.resolved, it->second.display, {i, i + len}});
      i += len;
      matched = true;
      break;
    }
    if (matched) continue;
    if (const auto count = positive_integer(tokens[i])) {
      const bool next_is_share = i + 1 < tokens.size() && is_share_word(tokens[i + 1]);
      const bool prev_is_shares = i > 0 && tokens[i - 1] == "shares";
      if (next_is_share || prev_is_shares) {
        const auto text = std::to_string(*count);
        matches.push_back(
            EntityMatch{EntityKind::ShareQuantity, tokens[i], text, text, {i, i + 1}});
      }
    }
    ++i;
  }
  return matches;
}

std::vector<std::string> abstract_tokens(const Utterance& utterance,
                                         const std::vector<EntityMatch>& entities) {
  std::vector<std::string> out;
  std::size_t next_entity = 0;
  for (std::size_t i = 0; i < utterance.tokens.size();) {
    if (next_entity < entities.size() && entities[next_entity].span.begin == i) {
      out.push_back(slot_token(entities[next_entity].kind));
      i = entities[next_entity].span.end;
      ++next_entity;
    } else {
      out.push_back(utterance.tokens[i]);
      ++i;
    }
  }
  return out;
}

double token_set_f1(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> left(a.begin(), a.end());
  const std::set<std::string> right(b.begin(), b.end());
  if (left.empty() || right.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& token : left) common += right.count(token);
  return 2.0 * static_cast<double>(common) / static_cast<double>(left.size() + right.size());
}

IntentMatch classify(const Utterance& utterance, const Corpus& corpus) {
  IntentMatch result;
  result.entities = extract_entities(utterance, corpus);
  const auto abstracted = abstract_tokens(utterance, result.entities);
  Intent best_intent = Intent::Fallback;
  double best = 0.0;
  for (const auto intent : kClassifiableIntents) {
    for (const auto& t : corpus.templates(intent)) {
      const double score = token_set_f1(abstracted, t.tokens);
      if (score > best) {
        best = score;
        best_intent = intent;
      }
    }
  }
  result.confidence = best;
  result.intent = best >= corpus.threshold() ? best_intent : Intent::Fallback;
  return result;
}

std::vector<std::string> suggestions(Intent intent, const std::vector<EntityMatch>& entities) {
  static const std::vector<std::string> kStarters{
      "What is a stock",
      "What is the stock price of Apple",
      "Show me the latest news for Amazon",
  };
  static const std::map<Intent, std::vector<std::string>> kSuccessors{
      {Intent::StockInformation,
       {"Show the company profile for {company}", "Give me a recommendation for {company}"}},
      {Intent::CompanyProfile,
       {"What is the stock price of {company}", "Show me the latest news for {company}",
        "Give me a recommendation for {company}"}},
      {Intent::News,
       {"What is the stock price of {company}", "Give me a recommendation for {company}"}},
      {Intent::Recommendation,
       {"Add 10 shares of {company} to my portfolio", "Show me the latest news for {company}",
        "What is RSI"}},
      {Intent::PortfolioAdd, {"Show my portfolio", "Give me a recommendation for {company}"}},
      {Intent::PortfolioRemove, {"Show my portfolio", "What is the stock price of {company}"}},
      {Intent::PortfolioShow,
       {"Add 10 shares of Apple to my portfolio", "Give me a recommendation for Amazon"}},
  };

  switch (intent) {
    case Intent::Greeting:
    case Intent::Help:
      return kStarters;
    case Intent::Fallback:
      return {"What can you do?", "Help"};
    case Intent::TradingTerm: {
      // Skip the term just asked about.
      const auto* term = [&]() -> const EntityMatch* {
        for (const auto& e : entities) {
          if (e.kind == EntityKind::Term) return &e;
        }
        return nullptr;
      }();
      static const std::vector<std::pair<std::string, std::string>> kTermPrompts{
          {"dividend", "What is a dividend"},
          {"bull_market", "What is a bull market"},
          {"etf", "What is an ETF"},
          {"", "What is the stock price of Apple"},
      };
      std::vector<std::string> out;
      for (const auto& [key, prompt] : kTermPrompts) {
        if (term && term->resolved == key) continue;
        out.push_back(prompt);
        if (out.size() == 3) break;
      }
      return out;
    }
    default:
      break;
  }

  const EntityMatch* company = nullptr;
  for (const auto& e : entities) {
    if (e.kind == EntityKind::Company) {
      company = &e;
      break;
    }
  }
  std::vector<std::string> out;
  for (const auto& prompt : kSuccessors.at(intent)) {
    const auto slot = prompt.find("{company}");
    if (slot == std::string::npos) {
      out.push_back(prompt);
    } else if (company) {
      auto text = prompt;
      text.replace(slot, 9, company->display);
      out.push_back(std::move(text));
    }
  }
  if (out.size() < 2) return kStarters;
  return out;
}

}  // namespace stockbabble::nlu
