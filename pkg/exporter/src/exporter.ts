/**
 * Runs an image through a backbone and captures the selected layer
 * activations as a DRF file plus a plain-text mapping report.
 *
 * Without a weights file the backbone runs with seeded deterministic
 * initialization: activation shapes, layer counting, and the DRF byte
 * layout are exactly those of the pretrained network, which is what the
 * downstream pipeline validates against. Supplying a tfjs-format
 * model.json switches to real pretrained weights.
 */

import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';

import {
  buildBackbone,
  expectedChannels,
  groupOfLayer,
  selectedLayers,
} from './backbones';
import { BackboneId, DrfFile, DrfLayer, encodeDrf } from './drf';
import { readPpm } from './ppm';

export interface ExportOptions {
  imagePath: string;
  backbone: BackboneId;
  outDir: string;
  weightsPath?: string;
  inputSize?: number;
  seed?: number;
}

export interface LayerReport {
  layerId: number;
  groupId: number;
  name: string;
  shape: number[];
  note: string;
}

export interface ExportResult {
  drfPath: string;
  reportPath: string;
  layers: LayerReport[];
}

const VGG_MEAN_BGR = [103.939, 116.779, 123.68];

function preprocess(image: tf.Tensor3D, backbone: BackboneId, inputSize: number): tf.Tensor4D {
  return tf.tidy(() => {
    let x: tf.Tensor = tf.image.resizeBilinear(image, [inputSize, inputSize]);
    if (backbone === 'mobilenetv2') {
      x = x.div(127.5).sub(1.0);
    } else {
      // caffe-style: RGB -> BGR, subtract ImageNet channel means
      const [r, g, b] = tf.split(x, 3, 2);
      x = tf.concat(
        [b.sub(VGG_MEAN_BGR[0]), g.sub(VGG_MEAN_BGR[1]), r.sub(VGG_MEAN_BGR[2])],
        2,
      );
    }
    return x.expandDims(0) as tf.Tensor4D;
  });
}

async function loadModelFromDisk(modelJsonPath: string): Promise<tf.LayersModel> {
  const dir = path.dirname(modelJsonPath);
  const handler: tf.io.IOHandler = {
    load: async () => {
      const modelJson = JSON.parse(fs.readFileSync(modelJsonPath, 'utf8'));
      const manifest = modelJson.weightsManifest as Array<{
        paths: string[];
        weights: tf.io.WeightsManifestEntry[];
      }>;
      const specs: tf.io.WeightsManifestEntry[] = [];
      const buffers: Buffer[] = [];
      for (const group of manifest) {
        specs.push(...group.weights);
        for (const p of group.paths) {
          buffers.push(fs.readFileSync(path.join(dir, p)));
        }
      }
      const blob = Buffer.concat(buffers);
      return {
        modelTopology: modelJson.modelTopology,
        format: modelJson.format,
        generatedBy: modelJson.generatedBy,
        convertedBy: modelJson.convertedBy,
        weightSpecs: specs,
        weightData: blob.buffer.slice(blob.byteOffset, blob.byteOffset + blob.byteLength),
      };
    },
  };
  return tf.loadLayersModel(handler);
}

export async function exportImage(opts: ExportOptions): Promise<ExportResult> {
  const inputSize = opts.inputSize ?? 224;
  const seed = opts.seed ?? 0;
  const ppm = readPpm(opts.imagePath);

  let model: tf.LayersModel;
  let layerNames: string[];
  let weightsNote: string;
  if (opts.weightsPath) {
    model = await loadModelFromDisk(opts.weightsPath);
    layerNames = model.layers.map((l) => l.name);
    weightsNote = `weights: ${opts.weightsPath}`;
  } else {
    const built = buildBackbone(opts.backbone, inputSize, seed);
    model = built.model;
    layerNames = built.layerNames;
    weightsNote = `weights: seeded deterministic initialization (seed ${seed})`;
  }

  const ids = selectedLayers(opts.backbone);
  for (const id of ids) {
    if (id >= layerNames.length) {
      throw new Error(
        `layer index ${id} outside the ${opts.backbone} model (${layerNames.length} layers)`,
      );
    }
  }
  const capture = tf.model({
    inputs: model.inputs,
    outputs: ids.map((id) => model.getLayer(layerNames[id]).output as tf.SymbolicTensor),
  });

  const imageTensor = tf.tensor3d(ppm.data, [ppm.height, ppm.width, 3]);
  const batch = preprocess(imageTensor, opts.backbone, inputSize);
  const outputs = capture.predict(batch) as tf.Tensor[];

  const expect = expectedChannels(opts.backbone);
  const layers: DrfLayer[] = [];
  const reports: LayerReport[] = [];
  for (let i = 0; i < ids.length; i++) {
    const id = ids[i];
    const out = outputs[i];
    const [, h, w, c] = out.shape as number[];
    const data = new Float32Array(await out.data());
    layers.push({
      layerId: id,
      groupId: groupOfLayer(opts.backbone, id),
      height: h,
      width: w,
      channels: c,
      data,
    });
    let note = 'ok';
    if (expect && expect.get(id) !== c) {
      note = `UNEXPECTED channels: got ${c}, expected ${expect.get(id)}`;
    }
    reports.push({
      layerId: id,
      groupId: groupOfLayer(opts.backbone, id),
      name: layerNames[id],
      shape: [h, w, c],
      note,
    });
  }
  imageTensor.dispose();
  batch.dispose();
  outputs.forEach((t) => t.dispose());

  const file: DrfFile = {
    backbone: opts.backbone,
    imageHeight: ppm.height,
    imageWidth: ppm.width,
    layers,
  };
  fs.mkdirSync(opts.outDir, { recursive: true });
  const stem = path.basename(opts.imagePath).replace(/\.[^.]+$/, '');
  const drfPath = path.join(opts.outDir, `${stem}_${opts.backbone}.drf`);
  fs.writeFileSync(drfPath, encodeDrf(file));

  const reportPath = path.join(opts.outDir, `${stem}_${opts.backbone}_layers.txt`);
  const lines = [
    `backbone: ${opts.backbone}`,
    `image: ${opts.imagePath} (${ppm.height}x${ppm.width}, recorded in the DRF header)`,
    `network input: ${inputSize}x${inputSize}`,
    weightsNote,
    `preprocessing: ${
      opts.backbone === 'mobilenetv2'
        ? 'x/127.5 - 1'
        : 'RGB->BGR, subtract ImageNet channel means'
    }`,
    'layer_id\tgroup\tname\tshape\tnote',
    ...reports.map(
      (r) => `${r.layerId}\t${r.groupId}\t${r.name}\t${r.shape.join('x')}\t${r.note}`,
    ),
  ];
  fs.writeFileSync(reportPath, lines.join('\n') + '\n');
  return { drfPath, reportPath, layers: reports };
}
