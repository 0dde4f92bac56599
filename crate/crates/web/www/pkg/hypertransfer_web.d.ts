/* tslint:disable */
/* eslint-disable */

/**
 * Interleaved `[r₀, m̃(r₀), r₁, m̃(r₁), …]` on an even grid.
 */
export function m_tilde_curve(rmin: number, rmax: number, steps: number): Float64Array;

/**
 * Reduction of `x + iy`: `γ`, `z₀` and the first letter of `γ`.
 */
export function reduce_point(x: number, y: number): string;

/**
 * Boundary arcs of `A(gx, gy) ∩ 𝓕`, the case tag and `m̂(gx, gy)`.
 */
export function region(gx: number, gy: number, samples: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly m_tilde_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly reduce_point: (a: number, b: number) => [number, number, number, number];
    readonly region: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
