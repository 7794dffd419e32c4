#pragma once

// Every user-facing sentence the agent says lives here.

#include <fmt/format.h>

#include <string>
#include <string_view>

namespace stockbabble::dialogue::messages {

inline constexpr std::string_view kGreeting =
    "Hello! I'm StockBabble. Ask me about share prices, company profiles, news, "
    "recommendations, trading terms or your portfolio.";
inline constexpr std::string_view kHelp =
    "I can look up prices and charts, company profiles, the latest news, buy/sell "
    "recommendations, explain trading terms, and keep a practice portfolio for you.";
inline constexpr std::string_view kFallback =
    "Sorry, I didn't understand that. Try one of the suggestions below or ask for help.";
inline constexpr std::string_view kWhichCompany =
    "Which company do you mean? Try naming it, for example \"Apple\".";
inline constexpr std::string_view kUnknownCompany = "I don't recognise that company.";
inline constexpr std::string_view kUnknownTermGeneric =
    "I don't have a definition for that term yet.";
inline constexpr std::string_view kSignInForPortfolio =
    "You need to be signed in to use a portfolio.";
inline constexpr std::string_view kEmptyPortfolio =
    "Your portfolio is empty. Try \"Add 10 shares of Apple to my portfolio\".";

inline std::string unknown_term(std::string_view term) {
  return fmt::format("I don't have a definition for \"{}\" yet.", term);
}

inline std::string provider_unavailable(std::string_view detail) {
  return fmt::format("I couldn't reach the market data service right now ({}).", detail);
}

inline std::string not_enough_history(std::string_view company, std::string_view detail) {
  return fmt::format("There isn't enough price history for {} to analyse it: {}.", company,
                     detail);
}

inline std::string no_news(std::string_view company) {
  return fmt::format("I couldn't find any recent news for {}.", company);
}

inline std::string how_many_shares(std::string_view company) {
  return fmt::format("How many shares of {} would you like to add? For example \"Add 10 shares "
                     "of {} to my portfolio\".",
                     company, company);
}

inline std::string something_went_wrong(std::string_view detail) {
  return fmt::format("Sorry, something went wrong: {}.", detail);
}

}  // namespace stockbabble::dialogue::messages
