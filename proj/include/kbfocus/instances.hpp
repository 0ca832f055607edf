#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kbfocus/errors.hpp"
#include "kbfocus/fca.hpp"
#include "kbfocus/prng.hpp"
#include "kbfocus/schema.hpp"

namespace kbfocus {

struct Instance {
    std::vector<std::uint8_t> bits; // one per attribute, sorted-attribute order
    std::string label;              // entity-type id

    friend bool operator==(const Instance&, const Instance&) = default;
};

struct GeneratorParams {
    std::size_t per_type = 50;
    double retention = 0.8; // probability an owned property is kept
    double noise = 0.02;    // probability a non-owned property is flipped on
    std::uint64_t seed = 0;

    friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

/// Labeled binary vectors sampled around each entity type's property row.
struct InstanceSet {
    std::string schema;
    std::vector<std::string> attributes;
    std::vector<Instance> instances;
    GeneratorParams params;

    friend bool operator==(const InstanceSet&, const InstanceSet&) = default;
};

/// Draws per_type instances per entity type: each owned property is kept
/// with probability `retention`, each non-owned property turned on with
/// probability `noise`. One uniform draw is consumed per cell, in sorted
/// type-id, then instance-index, then sorted property-id order, from a
/// single SplitMix64 stream, so equal seeds give identical sets.
inline InstanceSet generate_instances(const Schema& schema, GeneratorParams params) {
    if (params.per_type < 1) throw ValidationError("instance generator requires n >= 1");
    if (!(params.retention > 0.0 && params.retention <= 1.0))
        throw ValidationError("retention must be in (0, 1]");
    if (!(params.noise >= 0.0 && params.noise < 1.0))
        throw ValidationError("noise must be in [0, 1)");

    const FormalContext ctx = to_formal_context(schema);
    InstanceSet set;
    set.schema = schema.name;
    set.attributes = ctx.attributes;
    set.params = params;

    SplitMix64 rng(params.seed);
    for (std::size_t t = 0; t < ctx.objects.size(); ++t) {
        for (std::size_t i = 0; i < params.per_type; ++i) {
            Instance inst;
            inst.label = ctx.objects[t];
            inst.bits.resize(ctx.attributes.size());
            for (std::size_t a = 0; a < ctx.attributes.size(); ++a) {
                const double u = rng.next_double();
                const bool owned = ctx.at(t, a);
                inst.bits[a] = owned ? (u < params.retention) : (u < params.noise);
            }
            set.instances.push_back(std::move(inst));
        }
    }
    return set;
}

} // namespace kbfocus
