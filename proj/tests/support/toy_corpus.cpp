#include "toy_corpus.hpp"

#include <algorithm>
#include <set>

#include "d2t/linearizer.hpp"
#include "d2t/rng.hpp"
#include "d2t/sentence.hpp"
#include "d2t/strings.hpp"

namespace d2t::testing {

namespace {

const std::vector<std::string> kAdjectives = {"Golden", "Silver", "Crimson", "Quiet", "Rusty", "Blue",
                                              "Wandering", "Hidden", "Lucky", "Old", "Velvet", "Copper",
                                              "Amber", "Jolly", "Little", "Royal", "Northern", "Salty",
                                              "Green", "Merry"};
const std::vector<std::string> kNouns = {"Lantern", "Anchor", "Fox", "Kettle", "Mill", "Harbour", "Oak",
                                         "Pigeon", "Barrel", "Crown", "Spoon", "Garden", "Bell", "Compass",
                                         "Otter", "Bridge", "Falcon", "Wheel", "Lark", "Meadow"};
const std::vector<std::string> kEatType = {"restaurant", "pub", "coffee shop"};
const std::vector<std::string> kFood = {"Italian", "French", "Chinese", "Indian", "English", "Japanese"};
const std::vector<std::string> kArea = {"riverside", "city centre"};
const std::vector<std::string> kNear = {"Rainbow Vegetarian Café", "Burger King", "Crowne Plaza Hotel",
                                        "The Bakers", "Raja Indian Cuisine", "Café Sicilia"};
const std::vector<std::string> kPrice = {"cheap", "moderate", "expensive"};
const std::vector<std::string> kRating = {"low", "average", "excellent"};

const std::string& pick(const std::vector<std::string>& pool, Rng& rng) { return pool[rng.uniform(pool.size())]; }

}  // namespace

std::vector<CorpusRecord> restaurant_corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> names;
  for (const auto& a : kAdjectives) {
    for (const auto& b : kNouns) names.push_back("The " + a + " " + b);
  }
  for (std::size_t i = names.size(); i > 1; --i) std::swap(names[i - 1], names[rng.uniform(i)]);

  std::vector<CorpusRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = i < names.size() ? names[i] : names[i % names.size()] + " " + std::to_string(i);
    SlotValueMr mr;
    std::vector<std::string> sentences;
    const std::string eat = pick(kEatType, rng);
    const std::string food = pick(kFood, rng);
    mr.slots.push_back({"name", name});
    mr.slots.push_back({"eatType", eat});
    mr.slots.push_back({"food", food});
    sentences.push_back(name + " is a " + eat + " serving " + food + " food.");
    if (rng.uniform(4) != 0) {
      const std::string area = pick(kArea, rng);
      mr.slots.push_back({"area", area});
      if (rng.uniform(2)) {
        const std::string near = pick(kNear, rng);
        mr.slots.push_back({"near", near});
        sentences.push_back("It is located in the " + area + " area near " + near + ".");
      } else {
        sentences.push_back("It is located in the " + area + " area.");
      }
    }
    if (rng.uniform(3) != 0) {
      const std::string price = pick(kPrice, rng);
      mr.slots.push_back({"priceRange", price});
      sentences.push_back("Prices there are " + price + ".");
    }
    if (rng.uniform(3) != 0) {
      const std::string rating = pick(kRating, rng);
      mr.slots.push_back({"customer rating", rating});
      sentences.push_back("Customers rate it " + rating + ".");
    }
    if (rng.uniform(2)) {
      const bool yes = rng.uniform(2);
      mr.slots.push_back({"familyFriendly", yes ? "yes" : "no"});
      sentences.push_back(yes ? "Families are welcome." : "It does not welcome children.");
    }
    CorpusRecord rec;
    rec.id = "r" + std::to_string(i);
    rec.mr_type = MrType::Slots;
    rec.mr_raw = serialize_slot_mr(mr);
    rec.text = strings::join(sentences, " ");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<CorpusRecord> overfit_corpus() {
  auto rec = [](std::string id, MrType t, std::string raw, std::string text) {
    CorpusRecord r;
    r.id = std::move(id);
    r.mr_type = t;
    r.mr_raw = std::move(raw);
    r.text = std::move(text);
    return r;
  };
  const auto T = MrType::Triples, S = MrType::Slots, A = MrType::DialogueAct, M = MrType::Amr;
  return {
      rec("w1", T, "Aarhus | leaderName | Jacob_Bundsgaard", "The leader of Aarhus is Jacob Bundsgaard."),
      rec("w2", T, "Aarhus_Airport | cityServed | Aarhus", "Aarhus Airport serves the city of Aarhus."),
      rec("w3", T, "Alan_Bean | birthPlace | Wheeler,_Texas\nAlan_Bean | occupation | Test_pilot",
          "Alan Bean was born in Wheeler, Texas and worked as a test pilot."),
      rec("w4", T, "Adirondack_Regional_Airport | runwayLength | 2003.0",
          "Adirondack Regional Airport has a runway length of 2003.0."),
      rec("w5", T, "Ajoblanco | country | Spain\nAjoblanco | mainIngredients | Bread,_almonds,_garlic",
          "Ajoblanco comes from Spain and is made with bread, almonds, garlic."),
      rec("e1", S, "name[Zizzi], eatType[coffee shop], area[riverside]",
          "You can find a coffee shop named Zizzi in the riverside area."),
      rec("e2", S, "name[The Vaults], eatType[pub], food[Italian], near[Rainbow Vegetarian Café]",
          "The Vaults is an Italian pub near Rainbow Vegetarian Café."),
      rec("e3", S, "name[Loch Fyne], food[seafood], priceRange[high]",
          "Loch Fyne offers seafood at high prices."),
      rec("e4", S, "name[Green Man], familyFriendly[yes], area[city centre]",
          "Green Man welcomes families in the city centre."),
      rec("e5", S, "name[Cotto], customer rating[5 out of 5]", "Cotto has a customer rating of 5 out of 5."),
      rec("v1", A, "request(developer[EA Canada], specifier[favorite])",
          "What's your favorite game that EA Canada has made?"),
      rec("v2", A, "inform(name[Portal 2], genres[puzzle], player_perspective[first person])",
          "Portal 2 is a first person puzzle game."),
      rec("v3", A, "give_opinion(name[Tomb Raider], rating[good])", "I think Tomb Raider is a good game."),
      rec("v4", A, "confirm(name[Dota 2], has_multiplayer[yes])", "So Dota 2 supports multiplayer, right?"),
      rec("v5", A, "suggest(name[SpellForce 3], platforms[PC])", "Have you tried SpellForce 3 on PC?"),
      rec("a1", M,
          "(r / respond-01 :ARG0 (c / country :wiki \"United_States\" :name (n / name :op1 \"United\" :op2 "
          "\"States\")) :ARG1 (d / develop-01 :mod (t / that)) :ARG2 (c2 / condemn-01 :manner (s / swift)))",
          "The United States responded to that development with swift condemnation."),
      rec("a2", M, "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))", "The boy wants to go."),
      rec("a3", M, "(s / sing-01 :ARG0 (g / girl) :manner (l / loud))", "The girl sang loudly."),
      rec("a4", M, "(b / buy-01 :ARG0 (m / man) :ARG1 (h / house :mod (o / old)))", "A man bought an old house."),
      rec("a5", M, "(r / rain-01 :time (t / today))", "It rained today."),
  };
}

std::vector<SourceRecord> to_sources(const std::vector<CorpusRecord>& records) {
  std::vector<SourceRecord> out;
  for (const auto& r : records) out.push_back({r.id, r.parse(), r.text.value_or("")});
  return out;
}

namespace {

// Independent of the corruptor: first occurrence of `x` that is not glued to
// word characters on either side.
std::string replace_first_word(const std::string& text, const std::string& x, const std::string& y) {
  auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80; };
  for (std::size_t at = text.find(x); at != std::string::npos; at = text.find(x, at + 1)) {
    const bool left_ok = at == 0 || !word(text[at - 1]) || !word(x.front());
    const bool right_ok = at + x.size() == text.size() || !word(text[at + x.size()]) || !word(x.back());
    if (left_ok && right_ok) return text.substr(0, at) + y + text.substr(at + x.size());
  }
  return text;
}

}  // namespace

bool passes_label_check(const CorruptionExample& ex, const std::string& source_text) {
  const auto src = split_sentences(source_text).sentences;
  const auto out = split_sentences(ex.text).sentences;
  switch (ex.label) {
    case Label::Accurate:
      return ex.text == source_text;
    case Label::Omission: {
      if (out.size() >= src.size()) return false;
      // Every remaining sentence comes from the source.
      return std::all_of(out.begin(), out.end(),
                         [&](const std::string& s) { return std::find(src.begin(), src.end(), s) != src.end(); });
    }
    case Label::Repetition: {
      if (out.size() != src.size() + 1) return false;
      std::multiset<std::string> a(out.begin(), out.end());
      for (const auto& s : a) {
        if (a.count(s) >= 2) return true;
      }
      return false;
    }
    case Label::Hallucination: {
      if (out.size() != src.size() + 1) return false;
      const std::string joined = strings::normalize_space(source_text);
      return std::any_of(out.begin(), out.end(),
                         [&](const std::string& s) { return joined.find(s) == std::string::npos; });
    }
    case Label::ValueError: {
      const std::string norm = strings::normalize_space(source_text);
      const auto values = extract_values(ex.data);
      for (const auto& x : values) {
        for (const auto& y : values) {
          if (x != y && replace_first_word(norm, x, y) == ex.text && ex.text != norm) return true;
        }
      }
      return false;
    }
  }
  return false;
}

}  // namespace d2t::testing
