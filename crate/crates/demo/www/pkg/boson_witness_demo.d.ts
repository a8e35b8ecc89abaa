/* tslint:disable */
/* eslint-disable */

/**
 * `t` over `[0, π/2)` for the ac Stark state at the default photon outcome.
 */
export function acstark_curve(n: number, steps: number): Float64Array;

/**
 * Averaged identifier of the squeezed vacuum on an inclusive `K` grid.
 */
export function pdc_curve(lo: number, hi: number, steps: number): Float64Array;

/**
 * `τ` over `[0, π/2)` for the S^zS^z-evolved spin coherent pair.
 */
export function szsz_curve(n: number, steps: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly acstark_curve: (a: number, b: number) => [number, number, number, number];
    readonly pdc_curve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly szsz_curve: (a: number, b: number) => [number, number, number, number];
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
