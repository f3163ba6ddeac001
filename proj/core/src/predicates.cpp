#include "psheaf/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gmpxx.h>

namespace psheaf::predicates {

namespace {

constexpr double kEps = 0x1.0p-53;
constexpr double kO3dErrBound = (7.0 + 56.0 * kEps) * kEps;
constexpr double kIspErrBound = (16.0 + 224.0 * kEps) * kEps;

template <class T>
int sign_of(const T& x) {
  return (x > 0) - (x < 0);
}

int orient3d_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  mpq_class adx = mpq_class(a.x()) - d.x(), ady = mpq_class(a.y()) - d.y(),
            adz = mpq_class(a.z()) - d.z();
  mpq_class bdx = mpq_class(b.x()) - d.x(), bdy = mpq_class(b.y()) - d.y(),
            bdz = mpq_class(b.z()) - d.z();
  mpq_class cdx = mpq_class(c.x()) - d.x(), cdy = mpq_class(c.y()) - d.y(),
            cdz = mpq_class(c.z()) - d.z();
  mpq_class det = adx * (bdy * cdz - bdz * cdy) - ady * (bdx * cdz - bdz * cdx) +
                  adz * (bdx * cdy - bdy * cdx);
  return sgn(det);
}

int insphere_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                   const Vec3& e) {
  const Vec3* pts[4] = {&a, &b, &c, &d};
  mpq_class m[4][4];
  for (int i = 0; i < 4; ++i) {
    mpq_class x = mpq_class(pts[i]->x()) - e.x();
    mpq_class y = mpq_class(pts[i]->y()) - e.y();
    mpq_class z = mpq_class(pts[i]->z()) - e.z();
    m[i][0] = x;
    m[i][1] = y;
    m[i][2] = z;
    m[i][3] = x * x + y * y + z * z;
  }
  // Same sign convention as the floating-point expansion below:
  // det = (dlift*abc - clift*dab) + (blift*cda - alift*bcd).
  auto minor3 = [&](int r0, int r1, int r2) -> mpq_class {
    return m[r0][0] * (m[r1][1] * m[r2][2] - m[r1][2] * m[r2][1]) -
           m[r0][1] * (m[r1][0] * m[r2][2] - m[r1][2] * m[r2][0]) +
           m[r0][2] * (m[r1][0] * m[r2][1] - m[r1][1] * m[r2][0]);
  };
  mpq_class abc = minor3(0, 1, 2);
  mpq_class bcd = minor3(1, 2, 3);
  mpq_class cda = minor3(2, 3, 0);
  mpq_class dab = minor3(3, 0, 1);
  mpq_class det = (m[3][3] * abc - m[2][3] * dab) + (m[1][3] * cda - m[0][3] * bcd);
  return sgn(det);
}

}  // namespace

int orient3d(const Vec3& pa, const Vec3& pb, const Vec3& pc, const Vec3& pd) {
  const double adx = pa.x() - pd.x(), bdx = pb.x() - pd.x(), cdx = pc.x() - pd.x();
  const double ady = pa.y() - pd.y(), bdy = pb.y() - pd.y(), cdy = pc.y() - pd.y();
  const double adz = pa.z() - pd.z(), bdz = pb.z() - pd.z(), cdz = pc.z() - pd.z();

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;

  const double det =
      adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  const double errbound = kO3dErrBound * permanent;
  if (det > errbound || -det > errbound) return sign_of(det);
  return orient3d_exact(pa, pb, pc, pd);
}

int insphere(const Vec3& pa, const Vec3& pb, const Vec3& pc, const Vec3& pd,
             const Vec3& pe) {
  const double aex = pa.x() - pe.x(), bex = pb.x() - pe.x(), cex = pc.x() - pe.x(),
               dex = pd.x() - pe.x();
  const double aey = pa.y() - pe.y(), bey = pb.y() - pe.y(), cey = pc.y() - pe.y(),
               dey = pd.y() - pe.y();
  const double aez = pa.z() - pe.z(), bez = pb.z() - pe.z(), cez = pc.z() - pe.z(),
               dez = pd.z() - pe.z();

  const double aexbey = aex * bey, bexaey = bex * aey, ab = aexbey - bexaey;
  const double bexcey = bex * cey, cexbey = cex * bey, bc = bexcey - cexbey;
  const double cexdey = cex * dey, dexcey = dex * cey, cd = cexdey - dexcey;
  const double dexaey = dex * aey, aexdey = aex * dey, da = dexaey - aexdey;
  const double aexcey = aex * cey, cexaey = cex * aey, ac = aexcey - cexaey;
  const double bexdey = bex * dey, dexbey = dex * bey, bd = bexdey - dexbey;

  const double abc = aez * bc - bez * ac + cez * ab;
  const double bcd = bez * cd - cez * bd + dez * bc;
  const double cda = cez * da + dez * ac + aez * cd;
  const double dab = dez * ab + aez * bd + bez * da;

  const double alift = aex * aex + aey * aey + aez * aez;
  const double blift = bex * bex + bey * bey + bez * bez;
  const double clift = cex * cex + cey * cey + cez * cez;
  const double dlift = dex * dex + dey * dey + dez * dez;

  const double det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd);

  const double aezp = std::abs(aez), bezp = std::abs(bez), cezp = std::abs(cez),
               dezp = std::abs(dez);
  const double aexbeyp = std::abs(aexbey), bexaeyp = std::abs(bexaey);
  const double bexceyp = std::abs(bexcey), cexbeyp = std::abs(cexbey);
  const double cexdeyp = std::abs(cexdey), dexceyp = std::abs(dexcey);
  const double dexaeyp = std::abs(dexaey), aexdeyp = std::abs(aexdey);
  const double aexceyp = std::abs(aexcey), cexaeyp = std::abs(cexaey);
  const double bexdeyp = std::abs(bexdey), dexbeyp = std::abs(dexbey);
  const double permanent =
      ((cexdeyp + dexceyp) * bezp + (dexbeyp + bexdeyp) * cezp + (bexceyp + cexbeyp) * dezp) *
          alift +
      ((dexaeyp + aexdeyp) * cezp + (aexceyp + cexaeyp) * dezp + (cexdeyp + dexceyp) * aezp) *
          blift +
      ((aexbeyp + bexaeyp) * dezp + (bexdeyp + dexbeyp) * aezp + (dexaeyp + aexdeyp) * bezp) *
          clift +
      ((bexceyp + cexbeyp) * aezp + (cexaeyp + aexceyp) * bezp + (aexbeyp + bexaeyp) * cezp) *
          dlift;
  const double errbound = kIspErrBound * permanent;
  if (det > errbound || -det > errbound) return sign_of(det);
  return insphere_exact(pa, pb, pc, pd, pe);
}

int insphere_sos(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e,
                 const int (&priority)[5]) {
  const int s = insphere(a, b, c, d, e);
  if (s != 0) return s;

  // Raising the lift of point k by eps_k shifts the lift entry of row i of
  // the relative matrix (p_i - e, |p_i - e|^2) by eps_i - eps_e, so the
  // determinant gains sum_i (eps_i - eps_e) * C_i with C_i the cofactor of
  // the lift entry in row i. Expanding along the lift column reproduces the
  // expansion in insphere() exactly, so signs carry over unchanged.
  const int ca = -orient3d(b, c, d, e);
  const int cb = orient3d(a, c, d, e);
  const int cc = -orient3d(a, b, d, e);
  const int cd = orient3d(a, b, c, e);

  // Coefficient of eps_e is -(C_a + C_b + C_c + C_d); needs magnitudes.
  const Vec3* pts[4] = {&a, &b, &c, &d};
  mpq_class m[4][3];
  for (int i = 0; i < 4; ++i) {
    m[i][0] = mpq_class(pts[i]->x()) - e.x();
    m[i][1] = mpq_class(pts[i]->y()) - e.y();
    m[i][2] = mpq_class(pts[i]->z()) - e.z();
  }
  auto det3 = [&](int r0, int r1, int r2) -> mpq_class {
    return m[r0][0] * (m[r1][1] * m[r2][2] - m[r1][2] * m[r2][1]) -
           m[r0][1] * (m[r1][0] * m[r2][2] - m[r1][2] * m[r2][0]) +
           m[r0][2] * (m[r1][0] * m[r2][1] - m[r1][1] * m[r2][0]);
  };
  const mpq_class sum = -det3(1, 2, 3) + det3(0, 2, 3) - det3(0, 1, 3) + det3(0, 1, 2);
  const int ce = -sgn(sum);

  const int coef[5] = {ca, cb, cc, cd, ce};
  int order[5] = {0, 1, 2, 3, 4};
  std::sort(std::begin(order), std::end(order),
            [&](int x, int y) { return priority[x] > priority[y]; });
  for (int k : order) {
    if (coef[k] != 0) return coef[k];
  }
  return 0;
}

}  // namespace psheaf::predicates
