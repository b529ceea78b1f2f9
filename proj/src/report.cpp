#include "ehnet/report.hpp"

#include <utility>

namespace ehnet {

namespace {
constexpr std::array<std::pair<ModelSource, std::string_view>, 6> kNames{{
    {ModelSource::lemma1, "lemma1"},
    {ModelSource::renewal, "renewal"},
    {ModelSource::stationary_accounting, "stationary-accounting"},
    {ModelSource::simulated, "simulated"},
    {ModelSource::approx_small_delta, "approx-small-delta"},
    {ModelSource::approx_large_delta, "approx-large-delta"},
}};
} // namespace

std::string_view to_string(ModelSource source) noexcept {
    for (const auto& [value, name] : kNames) {
        if (value == source) return name;
    }
    return "unknown";
}

std::optional<ModelSource> model_source_from_string(std::string_view name) noexcept {
    for (const auto& [value, text] : kNames) {
        if (text == name) return value;
    }
    return std::nullopt;
}

} // namespace ehnet
