#include <benchmark/benchmark.h>

#include <omp.h>

#include "rotsym/convex.hpp"
#include "rotsym/fields.hpp"
#include "rotsym/heat_kernel.hpp"
#include "rotsym/jacobi.hpp"

using namespace rotsym;

namespace {

SurfaceSampleSet cylinder_samples() {
  ModelTag tag;
  tag.kind = ModelKind::Cylinder;
  tag.n = 4;
  GridSpec g;
  g.sphere_res = 8;
  g.z_res = 17;
  return sample_model(tag, g, -1);
}

void BM_DefectParallel(benchmark::State& st) {
  SurfaceSampleSet s = cylinder_samples();
  RotationFieldSet f = reference_fields(4);
  for (auto _ : st) benchmark::DoNotOptimize(symmetry_defect(f, s).defect);
}

void BM_DefectSerial(benchmark::State& st) {
  SurfaceSampleSet s = cylinder_samples();
  RotationFieldSet f = reference_fields(4);
  for (auto _ : st) benchmark::DoNotOptimize(symmetry_defect_serial(f, s).defect);
}

void BM_KernelQueries(benchmark::State& st) {
  ImageKernel k{4};
  for (auto _ : st) {
    double s = 0;
#pragma omp parallel for reduction(+ : s)
    for (int i = 0; i < 1000; ++i)
      s += eval_dirichlet_kernel(k, 0.001 * i - 0.5, 0.2, 0.3, -0.1, 0.01 + 0.016 * i).value;
    benchmark::DoNotOptimize(s);
  }
}

void BM_JacobiModes(benchmark::State& st) {
  SphereSpectrum spec = sphere_spectrum(4, 4);
  SphereField u = [](const Vec& th, double z1, double z2, double t) {
    return (th(0) * th(1) + th(2)) * std::cos(0.3 * z1) * std::cos(0.2 * z2) * std::sqrt(-t);
  };
  EvolveOptions o;
  o.N = 16;
  o.dt_rel = 0.05;
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(evolve_jacobi_cylinder(spec, u, u, 4, -8, -1, o, parallel));
}

void BM_Diameters(benchmark::State& st) {
  TriMesh m = scaled(icosphere(3), Vec3(1, 2, 4));
  DiameterOptions o{2, st.range(0) != 0};
  for (auto _ : st) benchmark::DoNotOptimize(diameters(m, o).d1);
}

}  // namespace

BENCHMARK(BM_DefectParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DefectSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelQueries)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JacobiModes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Diameters)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
