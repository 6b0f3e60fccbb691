#include "hsk/archetype.hpp"

#include <algorithm>
#include <cctype>

#include "hsk/error.hpp"

namespace hsk {

namespace {

struct Entry {
    Archetype kind;
    const char* name;
};

constexpr Entry kNames[] = {
    {Archetype::GruP, "GRU-P"},       {Archetype::GruM, "GRU-M"},         {Archetype::GruMPhys, "GRU-M-PHYS"},
    {Archetype::GruL, "GRU-L"},       {Archetype::LstmP, "LSTM-P"},       {Archetype::GruV, "GRU-V"},
    {Archetype::GruJadp, "GRU-JADP"}, {Archetype::Ja, "JA"},              {Archetype::JaResidual, "JA-RES"},
    {Archetype::PinnJa, "PINN-JA"},   {Archetype::Preisach, "PREISACH"},
};

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    std::replace(s.begin(), s.end(), '_', '-');
    return s;
}

}  // namespace

std::string to_string(Archetype a) {
    for (const auto& e : kNames) {
        if (e.kind == a) return e.name;
    }
    return "?";
}

Archetype parse_archetype(const std::string& name) {
    const std::string key = upper(name);
    for (const auto& e : kNames) {
        if (key == e.name) return e.kind;
    }
    throw ConfigError("unknown archetype '" + name + "'");
}

const std::vector<Archetype>& all_archetypes() {
    static const std::vector<Archetype> all = [] {
        std::vector<Archetype> v;
        for (const auto& e : kNames) v.push_back(e.kind);
        return v;
    }();
    return all;
}

bool uses_ja(Archetype a) {
    return a == Archetype::Ja || a == Archetype::GruJadp || a == Archetype::JaResidual || a == Archetype::PinnJa;
}

bool uses_gru(Archetype a) {
    return a != Archetype::LstmP && a != Archetype::Ja && a != Archetype::Preisach;
}

}  // namespace hsk
