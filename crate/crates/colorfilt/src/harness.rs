//! The experiment matrix: every (image, color space, noise, seed) cell is
//! corrupted in RGB, converted to the target space and run through each
//! configured filter. Denoising rows are scored with PSNR and SR against the
//! clean image in the same space; edge rows with R_SC on the raw edge map.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use colorfilt_core::color::convert;
use colorfilt_core::filters::{self, apply_edge};
use colorfilt_core::metrics::{self, SEGMENT_LENGTH};
use colorfilt_core::noise::apply_noise;
use colorfilt_core::synth::generate_synthetic_document;
use colorfilt_core::{Approach, ColorImage, ColorSpace, FilterKind, FilterSpec, LeeParams, MetricReport, NoiseSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::load_image;

/// `clean` or one of the six noise models `noise1` ... `noise6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NoiseId {
    Clean,
    Model(u8),
}

impl NoiseId {
    pub const TABLE: [NoiseId; 6] =
        [NoiseId::Model(1), NoiseId::Model(2), NoiseId::Model(3), NoiseId::Model(4), NoiseId::Model(5), NoiseId::Model(6)];
}

impl fmt::Display for NoiseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseId::Clean => f.write_str("clean"),
            NoiseId::Model(id) => write!(f, "noise{id}"),
        }
    }
}

impl FromStr for NoiseId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "clean" {
            return Ok(NoiseId::Clean);
        }
        match s.strip_prefix("noise").and_then(|n| n.parse::<u8>().ok()) {
            Some(id @ 1..=6) => Ok(NoiseId::Model(id)),
            _ => Err(format!("unknown noise id {s:?}; expected clean or noise1..noise6")),
        }
    }
}

impl TryFrom<String> for NoiseId {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<NoiseId> for String {
    fn from(id: NoiseId) -> String {
        id.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub width: usize,
    pub height: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ImageSource {
    File {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
    Synthetic {
        synthetic: SyntheticSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id: Option<String>,
    },
}

impl ImageSource {
    pub fn synthetic(width: usize, height: usize, seed: u64) -> Self {
        ImageSource::Synthetic { synthetic: SyntheticSpec { width, height, seed }, id: None }
    }

    pub fn id(&self) -> String {
        match self {
            ImageSource::File { id: Some(id), .. } | ImageSource::Synthetic { id: Some(id), .. } => id.clone(),
            ImageSource::File { path, .. } => {
                path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
            }
            ImageSource::Synthetic { synthetic: s, .. } => format!("synth-{}x{}-s{}", s.width, s.height, s.seed),
        }
    }

    pub fn load(&self) -> Result<ColorImage> {
        match self {
            ImageSource::File { path, .. } => load_image(path),
            ImageSource::Synthetic { synthetic: s, .. } => Ok(generate_synthetic_document(s.width, s.height, s.seed)?),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
}

fn default_spaces() -> Vec<ColorSpace> {
    vec![ColorSpace::Rgb]
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_segment() -> usize {
    SEGMENT_LENGTH
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub images: Vec<ImageSource>,
    #[serde(default = "default_spaces")]
    pub spaces: Vec<ColorSpace>,
    #[serde(default)]
    pub denoise: Vec<FilterSpec>,
    #[serde(default)]
    pub edge: Vec<FilterSpec>,
    pub noises: Vec<NoiseId>,
    /// Overrides for the default noise parameters, keyed by noise id.
    #[serde(default)]
    pub noise_parameters: BTreeMap<NoiseId, f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Optional Lee pre-smoothing of edge maps before R_SC.
    #[serde(default)]
    pub rsc_lee: Option<LeeParams>,
    #[serde(default = "default_segment")]
    pub rsc_segment: usize,
    /// Write wall-clock times into the CSV `ms` column. Off by default so that
    /// repeated runs produce identical CSV bytes; JSON always carries timings.
    #[serde(default)]
    pub csv_timing: bool,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    /// All denoising filters under all four approaches.
    pub fn all_denoise() -> Vec<FilterSpec> {
        [FilterKind::Median, FilterKind::MorphDenoise]
            .into_iter()
            .flat_map(|kind| Approach::ALL.into_iter().map(move |approach| FilterSpec { kind, approach }))
            .collect()
    }

    /// All edge filters under the marginal and vector approaches.
    pub fn all_edge() -> Vec<FilterSpec> {
        [FilterKind::Laplacian, FilterKind::Sobel, FilterKind::MorphGradient]
            .into_iter()
            .flat_map(|kind| Approach::SINGLE.into_iter().map(move |approach| FilterSpec { kind, approach }))
            .collect()
    }

    /// The desk-scale corpus: five synthetic 512x512 pages, three seeds, both
    /// color spaces, clean plus all six noise models, every filter.
    pub fn desk_default() -> Self {
        ExperimentConfig {
            images: (1..=5).map(|s| ImageSource::synthetic(512, 512, s)).collect(),
            spaces: vec![ColorSpace::Rgb, ColorSpace::Hsb],
            denoise: Self::all_denoise(),
            edge: Self::all_edge(),
            noises: std::iter::once(NoiseId::Clean).chain(NoiseId::TABLE).collect(),
            noise_parameters: BTreeMap::new(),
            seeds: vec![0, 1, 2],
            rsc_lee: None,
            rsc_segment: SEGMENT_LENGTH,
            csv_timing: false,
            output: OutputPaths::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.images.is_empty() {
            return fail("at least one image is required".into());
        }
        if self.spaces.is_empty() {
            return fail("at least one color space is required".into());
        }
        if self.denoise.is_empty() && self.edge.is_empty() {
            return fail("at least one filter is required".into());
        }
        if self.noises.is_empty() {
            return fail("at least one noise entry is required".into());
        }
        if self.seeds.is_empty() {
            return fail("at least one seed is required".into());
        }
        if self.rsc_segment < 2 {
            return fail(format!("rsc_segment must be at least 2, got {}", self.rsc_segment));
        }
        for spec in &self.denoise {
            if !spec.kind.is_denoising() {
                return fail(format!("{} is listed under denoise but is an edge filter", spec.kind));
            }
            spec.validate()?;
        }
        for spec in &self.edge {
            if !spec.kind.is_edge() {
                return fail(format!("{} is listed under edge but is a denoising filter", spec.kind));
            }
            spec.validate()?;
        }
        for (&id, &parameter) in &self.noise_parameters {
            self.noise_spec(id, 0).ok_or_else(|| Error::Config("clean takes no parameter".into()))?;
            let NoiseId::Model(n) = id else { unreachable!() };
            NoiseSpec::from_id(n, 0)?.with_parameter(parameter).validate()?;
        }
        for source in &self.images {
            if let ImageSource::File { path, .. } = source {
                if !path.exists() {
                    return fail(format!("image {} does not exist", path.display()));
                }
            }
        }
        Ok(())
    }

    /// The noise model behind `id`, with config overrides and the given seed.
    pub fn noise_spec(&self, id: NoiseId, seed: u64) -> Option<NoiseSpec> {
        let NoiseId::Model(n) = id else { return None };
        let spec = NoiseSpec::from_id(n, seed).ok()?;
        Some(match self.noise_parameters.get(&id) {
            Some(&p) => spec.with_parameter(p),
            None => spec,
        })
    }

    /// Rows a complete run produces.
    pub fn expected_rows(&self) -> usize {
        self.images.len() * self.spaces.len() * self.noises.len() * self.seeds.len() * (self.denoise.len() + self.edge.len())
    }
}

/// One cell of the experiment matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub image: String,
    pub space: ColorSpace,
    pub filter: FilterKind,
    pub approach: Approach,
    pub noise: NoiseId,
    pub seed: u64,
    pub metrics: MetricReport,
    /// Wall-clock filtering time; dual approaches include both passes.
    pub ms: f64,
    pub error: Option<String>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// RNG seed for corrupting image `image_index` with noise model `noise` under
/// the configured `seed`.
pub fn cell_seed(seed: u64, image_index: usize, noise: u8) -> u64 {
    splitmix64(seed ^ splitmix64(((image_index as u64) << 8) | noise as u64))
}

/// Corrupt `clean` (RGB) with `noise`; clean cells return the input.
pub fn corrupt(config: &ExperimentConfig, clean: &ColorImage, image_index: usize, noise: NoiseId, seed: u64) -> Result<ColorImage> {
    match noise {
        NoiseId::Clean => Ok(clean.clone()),
        NoiseId::Model(n) => {
            let spec = config.noise_spec(noise, cell_seed(seed, image_index, n)).expect("model id");
            Ok(apply_noise(clean, &spec)?)
        }
    }
}

fn single_pass(img: &ColorImage, kind: FilterKind, approach: Approach) -> colorfilt_core::Result<ColorImage> {
    filters::apply_denoise(img, FilterSpec { kind, approach })
}

/// Single-pass results shared between the single and dual approaches of one
/// input, with their times.
struct PassCache<'a> {
    input: &'a ColorImage,
    passes: HashMap<(FilterKind, Approach), (colorfilt_core::Result<ColorImage>, f64)>,
}

impl<'a> PassCache<'a> {
    fn first(&mut self, kind: FilterKind, approach: Approach) -> &(colorfilt_core::Result<ColorImage>, f64) {
        let input = self.input;
        self.passes.entry((kind, approach)).or_insert_with(|| {
            let t = Instant::now();
            let out = single_pass(input, kind, approach);
            (out, t.elapsed().as_secs_f64() * 1e3)
        })
    }

    fn run(&mut self, spec: FilterSpec) -> (colorfilt_core::Result<ColorImage>, f64) {
        let passes = spec.approach.passes();
        let (first, first_ms) = self.first(spec.kind, passes[0]);
        let first_ms = *first_ms;
        let first = match first {
            Ok(img) => img,
            Err(e) => return (Err(e.clone()), first_ms),
        };
        match passes.get(1) {
            None => (Ok(first.clone()), first_ms),
            Some(&second) => {
                let t = Instant::now();
                let out = single_pass(first, spec.kind, second);
                (out, first_ms + t.elapsed().as_secs_f64() * 1e3)
            }
        }
    }
}

fn score_denoise(reference: &ColorImage, filtered: &ColorImage) -> (MetricReport, Option<String>) {
    let psnr = metrics::psnr(reference, filtered);
    let sr = metrics::sr(reference, filtered);
    let error = [psnr.as_ref().err(), sr.as_ref().err()].into_iter().flatten().next().map(|e| e.to_string());
    (MetricReport { psnr: psnr.ok(), sr: sr.ok(), rsc: None }, error)
}

struct Unit {
    image_index: usize,
    noise: NoiseId,
    seed: u64,
}

fn run_unit(config: &ExperimentConfig, ids: &[String], clean: &[Result<ColorImage>], unit: &Unit) -> Vec<(usize, BenchResult)> {
    let mut rows = Vec::new();
    let row = |space, spec: FilterSpec, metrics, ms, error| {
        (
            unit.image_index,
            BenchResult {
                image: ids[unit.image_index].clone(),
                space,
                filter: spec.kind,
                approach: spec.approach,
                noise: unit.noise,
                seed: unit.seed,
                metrics,
                ms,
                error,
            },
        )
    };
    let all_specs = || config.denoise.iter().chain(&config.edge);

    let prepared = clean[unit.image_index]
        .as_ref()
        .map_err(|e| e.to_string())
        .and_then(|c| corrupt(config, c, unit.image_index, unit.noise, unit.seed).map(|n| (c, n)).map_err(|e| e.to_string()));
    let (clean_rgb, noisy_rgb) = match prepared {
        Ok(pair) => pair,
        Err(msg) => {
            for &space in &config.spaces {
                for &spec in all_specs() {
                    rows.push(row(space, spec, MetricReport::default(), 0.0, Some(msg.clone())));
                }
            }
            return rows;
        }
    };

    for &space in &config.spaces {
        let converted = convert(clean_rgb, space).and_then(|c| convert(&noisy_rgb, space).map(|n| (c, n)));
        let (reference, noisy) = match converted {
            Ok(pair) => pair,
            Err(e) => {
                for &spec in all_specs() {
                    rows.push(row(space, spec, MetricReport::default(), 0.0, Some(e.to_string())));
                }
                continue;
            }
        };

        let mut cache = PassCache { input: &noisy, passes: HashMap::new() };
        for &spec in &config.denoise {
            let (out, ms) = cache.run(spec);
            let (metrics, error) = match out {
                Ok(filtered) => score_denoise(&reference, &filtered),
                Err(e) => (MetricReport::default(), Some(e.to_string())),
            };
            rows.push(row(space, spec, metrics, ms, error));
        }

        for &spec in &config.edge {
            let t = Instant::now();
            let edges = apply_edge(&noisy, spec);
            let ms = t.elapsed().as_secs_f64() * 1e3;
            let scored = edges.and_then(|map| metrics::rsc(&map, config.rsc_segment, config.rsc_lee));
            let (metrics, error) = match scored {
                Ok(rsc) => (MetricReport { rsc: Some(rsc), ..Default::default() }, None),
                Err(e) => (MetricReport::default(), Some(e.to_string())),
            };
            rows.push(row(space, spec, metrics, ms, error));
        }
    }
    rows
}

/// Run the whole matrix. Per-cell failures are recorded in the row's `error`
/// field; only an invalid config fails the run. Rows come back sorted by
/// (image, space, filter, approach, noise, seed), image order being the
/// config order, so parallel execution never changes the output.
pub fn run_matrix(config: &ExperimentConfig) -> Result<Vec<BenchResult>> {
    config.validate()?;
    let ids: Vec<String> = config.images.iter().map(ImageSource::id).collect();
    let clean: Vec<Result<ColorImage>> = config.images.par_iter().map(ImageSource::load).collect();

    let units: Vec<Unit> = (0..config.images.len())
        .flat_map(|image_index| {
            config.noises.iter().flat_map(move |&noise| {
                config.seeds.iter().map(move |&seed| Unit { image_index, noise, seed })
            })
        })
        .collect();

    let mut rows: Vec<(usize, BenchResult)> =
        units.par_iter().flat_map_iter(|unit| run_unit(config, &ids, &clean, unit)).collect();
    rows.sort_by(|(ia, a), (ib, b)| {
        (ia, a.space, a.filter, a.approach, a.noise, a.seed).cmp(&(ib, b.space, b.filter, b.approach, b.noise, b.seed))
    });
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(noises: Vec<NoiseId>) -> ExperimentConfig {
        ExperimentConfig {
            images: vec![ImageSource::synthetic(64, 64, 3)],
            spaces: vec![ColorSpace::Rgb],
            denoise: vec![FilterSpec { kind: FilterKind::Median, approach: Approach::Marginal }],
            edge: vec![],
            noises,
            noise_parameters: BTreeMap::new(),
            seeds: vec![0],
            rsc_lee: None,
            rsc_segment: 3,
            csv_timing: false,
            output: OutputPaths::default(),
        }
    }

    #[test]
    fn noise_id_names() {
        assert_eq!("clean".parse::<NoiseId>().unwrap(), NoiseId::Clean);
        assert_eq!("noise4".parse::<NoiseId>().unwrap(), NoiseId::Model(4));
        assert!("noise7".parse::<NoiseId>().is_err());
        assert!("gaussian".parse::<NoiseId>().is_err());
        assert_eq!(NoiseId::Model(2).to_string(), "noise2");
    }

    #[test]
    fn single_cell_matrix() {
        let rows = run_matrix(&tiny(vec![NoiseId::Clean])).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].error.is_none());
        let r = &rows[0];
        assert_eq!((r.space, r.filter, r.approach, r.noise, r.seed), (ColorSpace::Rgb, FilterKind::Median, Approach::Marginal, NoiseId::Clean, 0));
        assert!(r.metrics.psnr.unwrap().is_finite() && r.metrics.sr.unwrap() > 0.0 && r.metrics.rsc.is_none());
    }

    #[test]
    fn config_validation() {
        let mut c = tiny(vec![]);
        assert!(matches!(run_matrix(&c), Err(Error::Config(_))));
        c.noises = vec![NoiseId::Clean];
        c.denoise = vec![FilterSpec { kind: FilterKind::Sobel, approach: Approach::Vector }];
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        c.denoise = vec![];
        c.edge = vec![FilterSpec { kind: FilterKind::Sobel, approach: Approach::MarginalThenVector }];
        assert!(c.validate().is_err());
        c.edge = vec![FilterSpec { kind: FilterKind::Sobel, approach: Approach::Vector }];
        assert!(c.validate().is_ok());
        c.images.push(ImageSource::File { path: "/no/such/page.png".into(), id: None });
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn parameter_overrides_apply() {
        let mut c = tiny(vec![NoiseId::Model(1)]);
        c.noise_parameters.insert(NoiseId::Model(1), 25.0);
        assert_eq!(c.noise_spec(NoiseId::Model(1), 0).unwrap().parameter, 25.0);
        c.noise_parameters.insert(NoiseId::Clean, 1.0);
        assert!(c.validate().is_err());
        c.noise_parameters.clear();
        c.noise_parameters.insert(NoiseId::Model(5), 1.5);
        assert!(c.validate().is_err());
    }

    #[test]
    fn cached_dual_passes_match_direct_application() {
        let img = generate_synthetic_document(64, 64, 9).unwrap();
        let noisy = apply_noise(&img, &NoiseSpec::from_id(2, 4).unwrap()).unwrap();
        let mut cache = PassCache { input: &noisy, passes: HashMap::new() };
        for spec in ExperimentConfig::all_denoise() {
            let (cached, _) = cache.run(spec);
            assert_eq!(cached.unwrap(), filters::apply_denoise(&noisy, spec).unwrap(), "{spec:?}");
        }
    }

    #[test]
    fn failing_cells_are_recorded() {
        // an all-black page makes SR undefined but the run carries on
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("black.png");
        crate::io::save_image(&ColorImage::filled(8, 8, ColorSpace::Rgb, colorfilt_core::PixelVector::ZERO), &path).unwrap();
        let mut c = tiny(vec![NoiseId::Clean]);
        c.images = vec![ImageSource::File { path, id: None }];
        c.edge = vec![FilterSpec { kind: FilterKind::Sobel, approach: Approach::Vector }];
        let rows = run_matrix(&c).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].error.as_deref().unwrap().contains("SR"));
        assert_eq!(rows[0].metrics.psnr, Some(f64::INFINITY));
        assert!(rows[1].error.is_none());
    }
}
