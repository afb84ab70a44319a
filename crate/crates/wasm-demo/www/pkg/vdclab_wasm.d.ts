/* tslint:disable */
/* eslint-disable */

/**
 * Characteristic vectors and family sizes along the descent chain, as JSON.
 */
export function pet_chain(family: string, max_steps: number): string;

/**
 * Weyl magnitudes for `h = 1..=h_max`, star discrepancy and a 64-bin histogram, as JSON.
 */
export function weyl_profile(spec: string, n_max: number, h_max: number): string;

/**
 * Window Weyl magnitudes `|(1/L) Σ_{n=M+1}^{M+L} e(h x_n)|` for `M = 0..=m_max`.
 */
export function window_scan(spec: string, window: number, m_max: number, h: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly pet_chain: (a: number, b: number, c: number) => [number, number, number, number];
    readonly weyl_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly window_scan: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
