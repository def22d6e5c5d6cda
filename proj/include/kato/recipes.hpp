#pragma once

#include "kato/grid.hpp"
#include "kato/sector.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace kato {

struct GaussianRecipe {
    std::vector<double> center;  // empty means origin
    double width = 1.0;
};

// Frequency support: the ball |xi| <= radius, or the sector weighted by its bump.
struct BandRegion {
    enum class Kind { ball, sector } kind = Kind::sector;
    double radius = 2.0;
};

struct RandomBandlimitedRecipe {
    BandRegion region;
    std::uint64_t seed = 1;
};

// Frequency-side mollified indicator of a plate centred at e1: width 1/R
// along e1 and 1/R^2 across.
struct KnappRecipe {
    double R = 16.0;
};

struct FileRecipe {
    std::string path;
};

using FieldRecipe = std::variant<GaussianRecipe, RandomBandlimitedRecipe, KnappRecipe, FileRecipe>;

// Produced fields other than the Gaussian and files have unit L2 norm.
Field make_field(const Grid& grid, const FieldRecipe& recipe);

// "gaussian:w=1[,c=x:y]" | "random:region=sector|ball:2,seed=7" | "knapp:R=16" | "file:path"
FieldRecipe parse_recipe(const std::string& text);

// Fraction of frequency-side L2 mass on nodes inside the closed sector.
double sector_mass_fraction(const Field& f);

}  // namespace kato
