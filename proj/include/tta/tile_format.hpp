#pragma once

#include <string>
#include <vector>

#include "tta/tiles.hpp"

namespace tta {

// Tile blocks:
//   tile <name>
//     <automaton lines without `initial`>
//     input <loc> guard "<g>" resets {..}
//     output <loc> guard "<g>" resets {..}
//     declare <loc|self> intervals "<set>"
//     cost location <loc> <n> | cost edge <src> <dst> <n> | weight <loc|self> <n>
//   end
// A tiled automaton file holds tile blocks followed by
//   ambient <C>
//   instance <id> <tile>
//   initial <id>
//   connect <id>.<out> <id>.<in> [label <letter>] [cost <n>]
std::vector<Tile> parse_tile_library(const std::string& text);
std::vector<Tile> load_tile_library(const std::string& path);
std::string write_tile(const Tile& tile);

TiledTA parse_tta(const std::string& text);
TiledTA load_tta(const std::string& path);
std::string write_tta(const TiledTA& tta);

const char* builtin_library_text();
const std::vector<Tile>& builtin_library();
std::int64_t library_max_constant(const std::vector<Tile>& library);
const Tile& find_tile(const std::vector<Tile>& library, const std::string& name);

}  // namespace tta
