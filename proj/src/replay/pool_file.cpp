#include "ogrl/replay/pool_file.hpp"

#include "ogrl/core/binary_io.hpp"
#include "ogrl/core/errors.hpp"

#include <unordered_map>

namespace ogrl::replay {

namespace {

void put_pose(ByteWriter& w, const std::optional<Pose>& pose)
{
    w.put_u8(pose ? 1 : 0);
    if (pose) {
        w.put_f64(pose->x);
        w.put_f64(pose->y);
        w.put_f64(pose->z);
        w.put_f64(pose->phi);
    }
}

std::optional<Pose> get_pose(ByteReader& r)
{
    const auto flag = r.get_u8();
    if (flag > 1)
        throw FormatError(FormatErrorKind::malformed, "bad pose flag");
    if (flag == 0)
        return std::nullopt;
    Pose p;
    p.x = r.get_f64();
    p.y = r.get_f64();
    p.z = r.get_f64();
    p.phi = r.get_f64();
    return p;
}

void put_vector(ByteWriter& w, const Eigen::VectorXd& v)
{
    w.put_u32(static_cast<std::uint32_t>(v.size()));
    w.put_f64s({v.data(), static_cast<std::size_t>(v.size())});
}

Eigen::VectorXd get_vector(ByteReader& r)
{
    const auto n = r.get_u32();
    if (static_cast<std::size_t>(n) * sizeof(double) > r.remaining())
        throw FormatError(FormatErrorKind::truncated, "vector length exceeds remaining bytes");
    Eigen::VectorXd v(n);
    r.get_f64s({v.data(), static_cast<std::size_t>(n)});
    return v;
}

std::string encode_episode(const Episode& ep)
{
    ByteWriter w;
    w.put_u64(ep.episode_id);
    w.put_u8(static_cast<std::uint8_t>(ep.provenance));
    w.put_f64(ep.outcome);
    put_pose(w, ep.final_pose);
    w.put_u32(static_cast<std::uint32_t>(ep.object_seeds.size()));
    for (auto s : ep.object_seeds)
        w.put_u64(s);

    std::unordered_map<const Eigen::VectorXd*, std::uint32_t> index;
    std::vector<const Eigen::VectorXd*> frames;
    auto frame_of = [&](const Features& f) {
        auto [it, inserted] = index.try_emplace(f.get(), static_cast<std::uint32_t>(frames.size()));
        if (inserted)
            frames.push_back(f.get());
        return it->second;
    };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> refs;
    refs.reserve(ep.transitions.size());
    for (const auto& t : ep.transitions) {
        const auto a = frame_of(t.obs);
        refs.emplace_back(a, frame_of(t.next_obs));
    }
    w.put_u32(static_cast<std::uint32_t>(frames.size()));
    for (const auto* f : frames)
        put_vector(w, *f);

    w.put_u32(static_cast<std::uint32_t>(ep.transitions.size()));
    for (std::size_t i = 0; i < ep.transitions.size(); ++i) {
        const auto& t = ep.transitions[i];
        w.put_u64(t.episode_id);
        w.put_i64(t.timestep);
        put_vector(w, t.action);
        w.put_f64(t.reward);
        w.put_u8(t.done ? 1 : 0);
        put_pose(w, t.gripper_pose);
        w.put_u32(refs[i].first);
        w.put_u32(refs[i].second);
    }
    return std::move(w).take();
}

Episode decode_episode(std::string_view bytes)
{
    ByteReader r(bytes);
    Episode ep;
    ep.episode_id = r.get_u64();
    const auto prov = r.get_u8();
    if (prov > 1)
        throw FormatError(FormatErrorKind::malformed, "unknown provenance tag");
    ep.provenance = static_cast<Provenance>(prov);
    ep.outcome = r.get_f64();
    ep.final_pose = get_pose(r);
    const auto n_seeds = r.get_u32();
    if (static_cast<std::size_t>(n_seeds) * 8 > r.remaining())
        throw FormatError(FormatErrorKind::truncated, "object seed list exceeds record");
    ep.object_seeds.resize(n_seeds);
    for (auto& s : ep.object_seeds)
        s = r.get_u64();

    const auto n_frames = r.get_u32();
    if (static_cast<std::size_t>(n_frames) * 4 > r.remaining())
        throw FormatError(FormatErrorKind::truncated, "frame table exceeds record");
    std::vector<Features> frames;
    frames.reserve(n_frames);
    for (std::uint32_t i = 0; i < n_frames; ++i)
        frames.push_back(make_features(get_vector(r)));

    const auto n_steps = r.get_u32();
    auto frame = [&](std::uint32_t i) {
        if (i >= frames.size())
            throw FormatError(FormatErrorKind::malformed, "frame index out of range");
        return frames[i];
    };
    for (std::uint32_t i = 0; i < n_steps; ++i) {
        Transition t;
        t.episode_id = r.get_u64();
        t.timestep = static_cast<int>(r.get_i64());
        t.action = get_vector(r);
        t.reward = r.get_f64();
        const auto done = r.get_u8();
        if (done > 1)
            throw FormatError(FormatErrorKind::malformed, "bad done flag");
        t.done = done == 1;
        t.gripper_pose = get_pose(r);
        t.obs = frame(r.get_u32());
        t.next_obs = frame(r.get_u32());
        ep.transitions.push_back(std::move(t));
    }
    if (r.remaining() != 0)
        throw FormatError(FormatErrorKind::malformed, "episode record has trailing bytes");
    return ep;
}

} // namespace

std::string encode_pool(const ReplayPool& pool)
{
    ByteWriter w;
    w.put_bytes(std::string_view(pool_magic, 4));
    w.put_u32(pool_version);
    w.put_u64(pool.env_hash());
    w.put_u64(pool.episode_count());
    const auto counters = pool.counters();
    w.put_u64(counters.initial_random);
    w.put_u64(counters.on_policy_added);
    w.put_u64(pool.capacity().value_or(0));
    for (const auto& ep : pool.episodes()) {
        const auto record = encode_episode(ep);
        w.put_u64(record.size());
        w.put_bytes(record);
    }
    w.seal();
    return std::move(w).take();
}

ReplayPool decode_pool(std::string_view bytes)
{
    {
        ByteReader header(bytes);
        if (header.get_bytes(4) != std::string_view(pool_magic, 4))
            throw FormatError(FormatErrorKind::bad_magic, "not a replay pool file");
        const auto version = header.get_u32();
        if (version != pool_version)
            throw FormatError(FormatErrorKind::version_mismatch,
                              "pool version " + std::to_string(version) + ", expected " + std::to_string(pool_version));
    }
    ByteReader r(verify_sealed(bytes));
    r.get_bytes(8);
    const auto env_hash = r.get_u64();
    const auto count = r.get_u64();
    PoolCounters stored;
    stored.initial_random = r.get_u64();
    stored.on_policy_added = r.get_u64();
    const auto capacity = r.get_u64();

    ReplayPool pool(capacity == 0 ? std::nullopt : std::optional<std::size_t>(capacity), env_hash);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto len = r.get_u64();
        if (len > r.remaining())
            throw FormatError(FormatErrorKind::truncated, "episode record exceeds file");
        auto ep = decode_episode(r.get_bytes(static_cast<std::size_t>(len)));
        try {
            pool.add_episode(std::move(ep));
        } catch (const InvalidEpisode& e) {
            throw FormatError(FormatErrorKind::malformed, e.what());
        }
    }
    if (r.remaining() != 0)
        throw FormatError(FormatErrorKind::malformed, "trailing bytes after episodes");
    if (!(pool.counters() == stored))
        throw FormatError(FormatErrorKind::malformed, "provenance counters disagree with episode tags");
    return pool;
}

void save_pool(const ReplayPool& pool, const std::filesystem::path& path) { write_file_atomic(path, encode_pool(pool)); }

ReplayPool load_pool(const std::filesystem::path& path) { return decode_pool(read_file(path)); }

} // namespace ogrl::replay
