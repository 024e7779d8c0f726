/* tslint:disable */
/* eslint-disable */

/**
 * Sequential penalized solves for the lowest `states` states, with traces
 * and the exact singlet energies for comparison.
 */
export function excited_states(problem: string, states: number, scheme: string, adaptive: boolean): string;

/**
 * Energy and gradient columns over `t ∈ [0, 2π]`.
 *
 * `circuit` is `toy` (4 qubits), `real` or `complex` (the 8-qubit
 * illustrative circuits); `schemes` is a comma-separated list such as
 * `exact4,real2+,real2-`.
 */
export function gradient_scan(circuit: string, schemes: string, points: number): string;

export function problems(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly excited_states: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly gradient_scan: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly problems: () => [number, number];
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
