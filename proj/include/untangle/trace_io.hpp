#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "untangle/strategies.hpp"

namespace untangle {

/// Trace document: {"instance": {...}, "strategy": id, "events": [{"removed":
/// [[a,b],[c,d]], "inserted": [[a,c],[b,d]], "tag": s}], "verdict": s,
/// "notes": [...], "snapshots": [[{"kind", "value", "log2", "context"}]]}.
std::string trace_to_json(const UntangleTrace& trace, int indent = -1);

/// Parses a trace document. "instance" may be embedded or a path, resolved
/// against `base_dir` when relative.
UntangleTrace load_trace_json(std::string_view text,
                              const std::filesystem::path& base_dir = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace untangle
