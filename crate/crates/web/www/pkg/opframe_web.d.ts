/* tslint:disable */
/* eslint-disable */

/**
 * Bundled scenario names, comma separated.
 */
export function bundled_names(): string;

/**
 * Source text of a bundled scenario, or an empty string.
 */
export function bundled_scenario(name: string): string;

export function exponential_weak(b: number, range: number, cells: number): string;

export function gabor_bounds(window: string, a: number, b: number): string;

/**
 * Run a scenario given as JSON text.
 */
export function run_scenario(text: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bundled_names: () => [number, number];
    readonly bundled_scenario: (a: number, b: number) => [number, number];
    readonly exponential_weak: (a: number, b: number, c: number) => [number, number, number, number];
    readonly gabor_bounds: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly run_scenario: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
