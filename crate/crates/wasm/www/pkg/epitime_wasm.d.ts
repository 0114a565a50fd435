/* tslint:disable */
/* eslint-disable */

export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly functional: number;
    readonly iterations: number;
    readonly lambda: number;
    /**
     * `undefined` for unconstrained problems.
     */
    readonly normal: boolean | undefined;
    readonly residualMax: number;
    readonly t: Float64Array;
    readonly y: Float64Array;
}

export class Profile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly backwardEstimate: number;
    readonly backward: number;
    readonly f: Float64Array;
    readonly forwardEstimate: number;
    readonly forward: number;
    readonly t: Float64Array;
    readonly value: number;
}

export function epiderivativeProfile(scale: string, f: string, at: number, h: number): Profile;

export function extremal(scale: string, lagrangian: string, u: number, alpha: number, beta: number, h: number): Curve;

export function isoperimetric(scale: string, lagrangian: string, constraint: string, u: number, w: number, k: number, alpha: number, beta: number, h: number): Curve;

export function scaleBounds(scale: string): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly __wbg_profile_free: (a: number, b: number) => void;
    readonly curve_functional: (a: number) => number;
    readonly curve_iterations: (a: number) => number;
    readonly curve_lambda: (a: number) => number;
    readonly curve_normal: (a: number) => number;
    readonly curve_residualMax: (a: number) => number;
    readonly curve_t: (a: number) => [number, number];
    readonly curve_y: (a: number) => [number, number];
    readonly epiderivativeProfile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly extremal: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly isoperimetric: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number, l: number) => [number, number, number];
    readonly profile_backward: (a: number) => number;
    readonly profile_backwardEstimate: (a: number) => number;
    readonly profile_f: (a: number) => [number, number];
    readonly profile_forward: (a: number) => number;
    readonly profile_forwardEstimate: (a: number) => number;
    readonly profile_t: (a: number) => [number, number];
    readonly profile_value: (a: number) => number;
    readonly scaleBounds: (a: number, b: number) => [number, number, number, number];
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
