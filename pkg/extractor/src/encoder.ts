// Deterministic contextual token encoder. Each subword unit gets a fixed
// hash-seeded base vector; stacked mixing layers blend every position with
// the mean of the rest of its sentence, so a token's representation depends
// on its context the way transformer states do. Inference only, no weights
// to download, bit-reproducible for a given model name and corpus.
//
// Model names follow "hashctx-<dim>x<layers>", e.g. the default hashctx-64x2.

export interface EncoderConfig {
  name: string;
  dim: number;
  layers: number;
  mix: number; // how much of each layer keeps the token itself
  seed: number;
}

export function parseModelName(name: string): EncoderConfig {
  const match = /^hashctx-(\d+)x(\d+)$/.exec(name);
  if (!match) {
    throw new Error(
      `unknown model ${JSON.stringify(name)}; expected "hashctx-<dim>x<layers>"`,
    );
  }
  return {
    name,
    dim: Number(match[1]),
    layers: Number(match[2]),
    mix: 0.25,
    seed: 9,
  };
}

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export class Encoder {
  private baseCache = new Map<string, Float64Array>();

  constructor(readonly config: EncoderConfig) {}

  baseVector(unit: string): Float64Array {
    let vec = this.baseCache.get(unit);
    if (!vec) {
      const rand = mulberry32(fnv1a(`${this.config.seed}:${unit}`));
      vec = new Float64Array(this.config.dim);
      const scale = 1 / Math.sqrt(this.config.dim);
      for (let d = 0; d < this.config.dim; d++) {
        // sum of uniforms, centered: cheap near-Gaussian draw
        vec[d] = (rand() + rand() + rand() - 1.5) * 2 * scale;
      }
      this.baseCache.set(unit, vec);
    }
    return vec;
  }

  /**
   * Contextual states for one sentence given as subword units.
   * Returns one matrix per layer (layer 0 = the static base vectors), so a
   * caller can select any layer; the last one is the default output.
   */
  encodeSentence(units: string[]): Float64Array[][] {
    const { dim, layers, mix } = this.config;
    const states: Float64Array[][] = [units.map((u) => this.baseVector(u))];
    for (let layer = 1; layer <= layers; layer++) {
      const prev = states[layer - 1];
      const total = new Float64Array(dim);
      for (const h of prev) {
        for (let d = 0; d < dim; d++) total[d] += h[d];
      }
      const next = prev.map((h) => {
        const out = new Float64Array(dim);
        if (prev.length === 1) {
          out.set(h);
          return out;
        }
        for (let d = 0; d < dim; d++) {
          const contextMean = (total[d] - h[d]) / (prev.length - 1);
          out[d] = mix * h[d] + (1 - mix) * contextMean;
        }
        return out;
      });
      states.push(next);
    }
    return states;
  }
}
