/* tslint:disable */
/* eslint-disable */

/**
 * `[lower, upper, f_star]` of the 2-D problem.
 */
export function domain(_function: string): Float64Array;

/**
 * Flat `[population, best_x, best_y, best_value, evaluations, x, y, ...]`
 * with one block of `population` points per snapshot.
 */
export function firefly_swarm(_function: string, sigma: number, generations: number, alpha: number, gamma: number, seed: number): Float64Array;

export function landscape(_function: string, sigma: number, resolution: number, seed: number): Float64Array;

/**
 * Flat `x0, y0, x1, y1, ...`.
 */
export function levy_walk(_function: string, lambda: number, steps: number, seed: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly domain: (a: number, b: number) => [number, number, number, number];
    readonly firefly_swarm: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly landscape: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly levy_walk: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
