#include "uavnet/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace uavnet {

namespace {

constexpr char kMagic[8] = {'U', 'A', 'V', 'N', 'E', 'T', 'C', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw CheckpointError("truncated checkpoint");
  return v;
}

void put_doubles(std::ostream& out, const double* data, std::size_t n) {
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(n * sizeof(double)));
}

void get_doubles(std::istream& in, double* data, std::size_t n) {
  in.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw CheckpointError("truncated checkpoint");
}

void put_vector(std::ostream& out, const Vector& v) {
  put_u32(out, static_cast<std::uint32_t>(v.size()));
  put_doubles(out, v.data(), static_cast<std::size_t>(v.size()));
}

Vector get_vector(std::istream& in) {
  const auto n = get_u32(in);
  Vector v(n);
  get_doubles(in, v.data(), n);
  return v;
}

void put_net(std::ostream& out, const Mlp& net) {
  put_u32(out, static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& layer : net.layers) {
    put_u32(out, static_cast<std::uint32_t>(layer.w.rows()));
    put_u32(out, static_cast<std::uint32_t>(layer.w.cols()));
    // row-major on disk regardless of in-memory layout
    for (Eigen::Index i = 0; i < layer.w.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.w.cols(); ++j) {
        const double v = layer.w(i, j);
        put_doubles(out, &v, 1);
      }
    put_doubles(out, layer.b.data(), static_cast<std::size_t>(layer.b.size()));
  }
}

Mlp get_net(std::istream& in) {
  Mlp net;
  const auto n_layers = get_u32(in);
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    Layer layer;
    const auto rows = get_u32(in);
    const auto cols = get_u32(in);
    layer.w.resize(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j) {
        double v;
        get_doubles(in, &v, 1);
        layer.w(i, j) = v;
      }
    layer.b.resize(rows);
    get_doubles(in, layer.b.data(), rows);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(ckpt.mode));
  put_u32(out, ckpt.dynamic_users ? 1 : 0);
  put_u32(out, static_cast<std::uint32_t>(ckpt.n_uav));
  put_vector(out, ckpt.state_norm.lo);
  put_vector(out, ckpt.state_norm.hi);
  put_vector(out, ckpt.actions.lo);
  put_vector(out, ckpt.actions.hi);
  put_vector(out, ckpt.actions.clip_hi);
  put_net(out, ckpt.actor);
  put_net(out, ckpt.critic);
  put_net(out, ckpt.actor_target);
  put_net(out, ckpt.critic_target);
  if (!out) throw CheckpointError("short write: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw CheckpointError("not a checkpoint file: " + path);
  Checkpoint ckpt;
  ckpt.mode = static_cast<int>(get_u32(in));
  ckpt.dynamic_users = get_u32(in) != 0;
  ckpt.n_uav = static_cast<int>(get_u32(in));
  ckpt.state_norm.lo = get_vector(in);
  ckpt.state_norm.hi = get_vector(in);
  ckpt.actions.lo = get_vector(in);
  ckpt.actions.hi = get_vector(in);
  ckpt.actions.clip_hi = get_vector(in);
  ckpt.actor = get_net(in);
  ckpt.critic = get_net(in);
  ckpt.actor_target = get_net(in);
  ckpt.critic_target = get_net(in);
  return ckpt;
}

}  // namespace uavnet
