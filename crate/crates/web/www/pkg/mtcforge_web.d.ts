/* tslint:disable */
/* eslint-disable */

/**
 * Coupled pairs of `target` (`Class.name` or `Class.name(int)`), as JSON.
 */
export function analyze(source: string, target: string): string;

/**
 * The retain rule for pass rate `p` on the original against the pass rates
 * on each mutant.
 */
export function decide(p: number, p_primes: Float64Array): string;

/**
 * Every well-typed mutant of the pair, with a unified diff each.
 */
export function mutants(source: string, target: string, candidate: string): string;

/**
 * The bundled AES corpus, concatenated, to start the page with.
 */
export function sample(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly analyze: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly decide: (a: number, b: number, c: number) => [number, number, number, number];
    readonly mutants: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly sample: () => [number, number];
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
