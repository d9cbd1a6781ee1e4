#pragma once

// The four dataset examples used across the tests, as raw records, their
// expected linearizations and their reference texts.

#include <string_view>

namespace d2t::testing {

inline constexpr std::string_view kWebnlgRaw = "Aarhus | leaderName | Jacob_Bundsgaard";
inline constexpr std::string_view kWebnlgLinearized =
    "<subject> Aarhus <predicate> leader name <object> Jacob Bundsgaard";
inline constexpr std::string_view kWebnlgText = "The leader of Aarhus is Jacob Bundsgaard.";

inline constexpr std::string_view kE2eRaw = "name[Zizzi], eatType[coffee shop], area[riverside]";
// The reference form, which lacks the ';' after the area slot.
inline constexpr std::string_view kE2eReferenceLinearized =
    "<name> name=[Zizzi]; <area> area=[riverside] <eatType> eatType=[coffee shop];";
inline constexpr std::string_view kE2eText = "You can find a coffee shop named Zizzi in the riverside area.";

inline constexpr std::string_view kViggoRaw = "request( developer[EA Canada], specifier[favorite])";
inline constexpr std::string_view kViggoLinearized =
    "<request> request (<developer> developer: [EA Canada], <specifier> specifier: [favorite] <request>)";
inline constexpr std::string_view kViggoText = "What's your favorite game that EA Canada has made?";

inline constexpr std::string_view kAmrRaw = R"((r / respond-01
 :ARG0 (c / country :wiki "United_States"
   :name (n / name :op1 "United"
   :op2 "States"))
 :ARG1 (d / develop-01
   :mod (t / that))
 :ARG2 (c2 / condemn-01
   :manner (s / swift))))";
inline constexpr std::string_view kAmrLinearized =
    "(respond <:ARG0> (country <:name> (United States)) <:ARG1> (develop <:mod> (that)) "
    "<:ARG2> (condemn <:manner> (swift)))";
inline constexpr std::string_view kAmrText = "The United States responded to that development with swift condemnation.";

inline constexpr std::string_view kVaultsText =
    "The Vaults is an Italian pub in the riverside area near Rainbow Vegetarian Café. It has an average "
    "customer rating and a high price range. It is not child friendly.";

}  // namespace d2t::testing
