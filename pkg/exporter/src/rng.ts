/** Deterministic random number generation.
 *
 * Everything stochastic in the exporter (model weights, LIME masks) is
 * driven by mulberry32 streams derived from string keys, so a given
 * (model, seed, instance) always produces the same bytes on disk.
 */

/** 32-bit FNV-1a hash of a string. Stable across platforms. */
export function fnv1a(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

export type Rng = () => number;

/** mulberry32: tiny 32-bit generator, uniform on [0, 1). */
export function mulberry32(seed: number): Rng {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Stream keyed by a string, e.g. `${seed}:${instanceId}:lime`. */
export function keyedRng(key: string): Rng {
  return mulberry32(fnv1a(key));
}

/** Standard normal draw via Box-Muller (uses two uniforms per call). */
export function gaussian(rng: Rng): number {
  // guard against log(0)
  const u = Math.max(rng(), 1e-12);
  const v = rng();
  return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
}
