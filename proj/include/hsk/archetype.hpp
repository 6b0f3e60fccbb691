#pragma once

#include <string>
#include <vector>

namespace hsk {

enum class Archetype {
    GruP,
    GruM,
    GruMPhys,  // field from B/mu0 minus scaled magnetization; unstable, never a default
    GruL,
    LstmP,
    GruV,
    GruJadp,
    Ja,
    JaResidual,
    PinnJa,
    Preisach,
};

std::string to_string(Archetype a);

/// Accepts the display names ("GRU-P", "LSTM-P", "JA-RES", ...) case-insensitively.
Archetype parse_archetype(const std::string& name);

const std::vector<Archetype>& all_archetypes();

/// Archetypes whose rollout integrates the JA model in physical units.
bool uses_ja(Archetype a);

/// Archetypes built around a GRU cell.
bool uses_gru(Archetype a);

}  // namespace hsk
