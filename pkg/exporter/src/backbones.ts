/**
 * Functional builders for the three supported encoders.
 *
 * Layers are counted in construction order with the input layer at index
 * 0, matching the conventional enumeration of these architectures'
 * layer lists; the mapping report emitted next to each DRF makes the
 * counting auditable (index -> layer name -> activation shape).
 */

import * as tf from '@tensorflow/tfjs';

import { BackboneId } from './drf';

export const LAYER_TABLES: Record<BackboneId, number[][]> = {
  vgg16: [[1, 2], [4, 5], [7, 8, 9], [11, 12, 13], [15, 16, 17]],
  vgg19: [[1, 2], [4, 5], [7, 8, 9, 10], [12, 13, 14, 15], [17, 18, 19, 20]],
  mobilenetv2: [
    [16, 18],
    [24, 32],
    [41, 50, 59, 67],
    [76, 85, 94, 102],
    [111, 120, 137, 146],
  ],
  toy: [[1, 2], [3, 4], [5, 6], [7, 8], [9, 10]],
};

export function selectedLayers(backbone: BackboneId): number[] {
  return LAYER_TABLES[backbone].flat();
}

export function groupOfLayer(backbone: BackboneId, layerId: number): number {
  const groups = LAYER_TABLES[backbone];
  for (let g = 0; g < groups.length; g++) {
    if (groups[g].includes(layerId)) return g + 1;
  }
  throw new Error(`layer ${layerId} not selected for ${backbone}`);
}

export interface BuiltBackbone {
  model: tf.LayersModel;
  /** name of the layer at each counted index (0 = input) */
  layerNames: string[];
}

interface Recorder {
  names: string[];
  tensors: tf.SymbolicTensor[];
  seed: number;
}

function record(rec: Recorder, name: string, t: tf.SymbolicTensor): tf.SymbolicTensor {
  rec.names.push(name);
  rec.tensors.push(t);
  return t;
}

function convInit(rec: Recorder) {
  // one deterministic seed per created layer
  return tf.initializers.glorotUniform({ seed: rec.seed + rec.names.length });
}

function vggConv(rec: Recorder, x: tf.SymbolicTensor, filters: number, name: string) {
  const layer = tf.layers.conv2d({
    filters,
    kernelSize: 3,
    padding: 'same',
    activation: 'relu',
    kernelInitializer: convInit(rec),
    name,
  });
  return record(rec, name, layer.apply(x) as tf.SymbolicTensor);
}

function vggPool(rec: Recorder, x: tf.SymbolicTensor, name: string) {
  const layer = tf.layers.maxPooling2d({ poolSize: 2, strides: 2, name });
  return record(rec, name, layer.apply(x) as tf.SymbolicTensor);
}

function buildVgg(blocks: number[], inputSize: number, seed: number): BuiltBackbone {
  const rec: Recorder = { names: [], tensors: [], seed };
  const input = tf.input({ shape: [inputSize, inputSize, 3], name: 'input_1' });
  record(rec, 'input_1', input);
  const widths = [64, 128, 256, 512, 512];
  let x = input;
  blocks.forEach((convCount, b) => {
    for (let i = 0; i < convCount; i++) {
      x = vggConv(rec, x, widths[b], `block${b + 1}_conv${i + 1}`);
    }
    x = vggPool(rec, x, `block${b + 1}_pool`);
  });
  const model = tf.model({ inputs: input, outputs: x });
  return { model, layerNames: rec.names };
}

function relu6(rec: Recorder, x: tf.SymbolicTensor, name: string) {
  const layer = tf.layers.reLU({ maxValue: 6, name });
  return record(rec, name, layer.apply(x) as tf.SymbolicTensor);
}

function bn(rec: Recorder, x: tf.SymbolicTensor, name: string) {
  const layer = tf.layers.batchNormalization({ epsilon: 1e-3, momentum: 0.999, name });
  return record(rec, name, layer.apply(x) as tf.SymbolicTensor);
}

function invertedResBlock(
  rec: Recorder,
  x: tf.SymbolicTensor,
  expansion: number,
  stride: number,
  filters: number,
  blockId: number,
): tf.SymbolicTensor {
  const inChannels = x.shape[x.shape.length - 1] as number;
  const prefix = blockId === 0 ? 'expanded_conv_' : `block_${blockId}_`;
  let y = x;
  if (blockId !== 0) {
    const expand = tf.layers.conv2d({
      filters: expansion * inChannels,
      kernelSize: 1,
      padding: 'same',
      useBias: false,
      kernelInitializer: convInit(rec),
      name: `${prefix}expand`,
    });
    y = record(rec, `${prefix}expand`, expand.apply(y) as tf.SymbolicTensor);
    y = bn(rec, y, `${prefix}expand_BN`);
    y = relu6(rec, y, `${prefix}expand_relu`);
  }
  if (stride === 2) {
    const pad = tf.layers.zeroPadding2d({
      padding: [[0, 1], [0, 1]],
      name: `${prefix}pad`,
    });
    y = record(rec, `${prefix}pad`, pad.apply(y) as tf.SymbolicTensor);
  }
  const depthwise = tf.layers.depthwiseConv2d({
    kernelSize: 3,
    strides: stride,
    padding: stride === 2 ? 'valid' : 'same',
    useBias: false,
    depthwiseInitializer: convInit(rec),
    name: `${prefix}depthwise`,
  });
  y = record(rec, `${prefix}depthwise`, depthwise.apply(y) as tf.SymbolicTensor);
  y = bn(rec, y, `${prefix}depthwise_BN`);
  y = relu6(rec, y, `${prefix}depthwise_relu`);
  const project = tf.layers.conv2d({
    filters,
    kernelSize: 1,
    padding: 'same',
    useBias: false,
    kernelInitializer: convInit(rec),
    name: `${prefix}project`,
  });
  y = record(rec, `${prefix}project`, project.apply(y) as tf.SymbolicTensor);
  y = bn(rec, y, `${prefix}project_BN`);
  if (inChannels === filters && stride === 1) {
    const add = tf.layers.add({ name: `${prefix}add` });
    y = record(rec, `${prefix}add`, add.apply([x, y]) as tf.SymbolicTensor);
  }
  return y;
}

function buildMobileNetV2(inputSize: number, seed: number): BuiltBackbone {
  const rec: Recorder = { names: [], tensors: [], seed };
  const input = tf.input({ shape: [inputSize, inputSize, 3], name: 'input_1' });
  record(rec, 'input_1', input);
  const conv1 = tf.layers.conv2d({
    filters: 32,
    kernelSize: 3,
    strides: 2,
    padding: 'same',
    useBias: false,
    kernelInitializer: convInit(rec),
    name: 'Conv1',
  });
  let x = record(rec, 'Conv1', conv1.apply(input) as tf.SymbolicTensor);
  x = bn(rec, x, 'bn_Conv1');
  x = relu6(rec, x, 'Conv1_relu');

  // (expansion, filters, repeats, first stride) per stage
  const stages: Array<[number, number, number, number]> = [
    [1, 16, 1, 1],
    [6, 24, 2, 2],
    [6, 32, 3, 2],
    [6, 64, 4, 2],
    [6, 96, 3, 1],
    [6, 160, 3, 2],
    [6, 320, 1, 1],
  ];
  let blockId = 0;
  for (const [expansion, filters, repeats, firstStride] of stages) {
    for (let r = 0; r < repeats; r++) {
      x = invertedResBlock(rec, x, expansion, r === 0 ? firstStride : 1, filters, blockId);
      blockId += 1;
    }
  }
  const convLast = tf.layers.conv2d({
    filters: 1280,
    kernelSize: 1,
    useBias: false,
    kernelInitializer: convInit(rec),
    name: 'Conv_1',
  });
  x = record(rec, 'Conv_1', convLast.apply(x) as tf.SymbolicTensor);
  x = bn(rec, x, 'Conv_1_bn');
  x = relu6(rec, x, 'out_relu');
  const model = tf.model({ inputs: input, outputs: x });
  return { model, layerNames: rec.names };
}

export function buildBackbone(
  backbone: BackboneId,
  inputSize: number,
  seed = 0,
): BuiltBackbone {
  switch (backbone) {
    case 'vgg16':
      return buildVgg([2, 2, 3, 3, 3], inputSize, seed);
    case 'vgg19':
      return buildVgg([2, 2, 4, 4, 4], inputSize, seed);
    case 'mobilenetv2':
      return buildMobileNetV2(inputSize, seed);
    default:
      throw new Error(`no builder for backbone ${backbone}`);
  }
}

/** Known channel widths of the selected layers, for report-time validation. */
export function expectedChannels(backbone: BackboneId): Map<number, number> | null {
  if (backbone === 'vgg16') {
    const widths = [64, 64, 128, 128, 256, 256, 256, 512, 512, 512, 512, 512, 512];
    return new Map(selectedLayers('vgg16').map((id, i) => [id, widths[i]]));
  }
  if (backbone === 'vgg19') {
    const widths = [64, 64, 128, 128, 256, 256, 256, 256,
                    512, 512, 512, 512, 512, 512, 512, 512];
    return new Map(selectedLayers('vgg19').map((id, i) => [id, widths[i]]));
  }
  return null; // mobilenetv2 counting is reported, not asserted
}
