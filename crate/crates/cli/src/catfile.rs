//! Category spec files.
//!
//! A spec is a sequence of bracketed sections. Either the tables are written
//! out (`[meta]`, `[identities K]`, `[maps]`, `[comp K]`) or a single
//! `[builder]` line constructs a catalog category. `[involution ...]` and
//! `[conjugation ...]` sections may follow either form. `K` is a depth for
//! globular categories and a level set such as `{1,2}` for full-depth ones.
//! Cells are referred to by name everywhere.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hicat_core::catalog::{self, Group};
use hicat_core::conjugation::{Conjugate, ConjugationData, ConjugationFlags};
use hicat_core::hypermatrix::product_inversion;
use hicat_core::involutive::InvolutionSpec;
use hicat_core::ncat::{
    build_pair_groupoid, build_product, build_terminal, CellId, CompositionTable, FiniteGlobularCategory,
    FullDepthCategory, LevelSet, MultiCategory,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{file}:{line}: {message}")]
pub struct ParseError {
    pub file: String,
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub enum Base {
    Globular(FiniteGlobularCategory),
    FullDepth(FullDepthCategory),
}

impl Base {
    pub fn kind(&self) -> &'static str {
        match self {
            Base::Globular(_) => "globular",
            Base::FullDepth(_) => "fulldepth",
        }
    }

    pub fn as_globular(&self) -> Option<&FiniteGlobularCategory> {
        match self {
            Base::Globular(c) => Some(c),
            Base::FullDepth(_) => None,
        }
    }

    pub fn names(&self) -> &[String] {
        match self {
            Base::Globular(c) => c.names(),
            Base::FullDepth(c) => c.names(),
        }
    }

    /// Composition index from its written key: a depth, or a level set for
    /// full-depth categories.
    pub fn composition_key(&self, key: &str) -> Result<usize, String> {
        match self {
            Base::Globular(c) => key_index(key, c.depth()),
            Base::FullDepth(c) => subset_key(key, c.directions()),
        }
    }
}

fn key_index(key: &str, depth: usize) -> Result<usize, String> {
    match key.parse::<usize>() {
        Ok(p) if p < depth => Ok(p),
        _ => Err(format!("`{key}` is not a depth below {depth}")),
    }
}

fn subset_key(key: &str, n: usize) -> Result<usize, String> {
    let g = parse_level_set(key, n)?;
    Ok(g.0 as usize)
}

/// Parses `{}`, `none`, `full`, `{1,3}` or `1,3` (1-based levels).
pub fn parse_level_set(text: &str, n: usize) -> Result<LevelSet, String> {
    let t = text.trim();
    match t {
        "none" => return Ok(LevelSet(0)),
        "full" => return Ok(LevelSet::all(n)),
        _ => {}
    }
    let inner = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(t);
    let mut levels = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.parse::<usize>() {
            Ok(k) if k >= 1 && k <= n => levels.push(k),
            _ => return Err(format!("`{part}` is not a level between 1 and {n}")),
        }
    }
    Ok(LevelSet::from_levels(&levels))
}

impl MultiCategory for Base {
    fn cell_count(&self) -> usize {
        match self {
            Base::Globular(c) => c.cell_count(),
            Base::FullDepth(c) => c.cell_count(),
        }
    }
    fn composition_count(&self) -> usize {
        match self {
            Base::Globular(c) => c.composition_count(),
            Base::FullDepth(c) => c.composition_count(),
        }
    }
    fn table(&self, k: usize) -> &CompositionTable {
        match self {
            Base::Globular(c) => c.table(k),
            Base::FullDepth(c) => c.table(k),
        }
    }
    fn cell_name(&self, x: CellId) -> &str {
        match self {
            Base::Globular(c) => c.cell_name(x),
            Base::FullDepth(c) => c.cell_name(x),
        }
    }
    fn composition_label(&self, k: usize) -> String {
        match self {
            Base::Globular(c) => c.composition_label(k),
            Base::FullDepth(c) => c.composition_label(k),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NamedInvolution {
    pub name: String,
    pub spec: InvolutionSpec,
}

#[derive(Debug, Clone)]
pub struct ConjugationSpec {
    pub data: ConjugationData,
    pub flags: ConjugationFlags,
}

#[derive(Debug, Clone)]
pub struct CategoryFile {
    pub base: Base,
    pub involutions: Vec<NamedInvolution>,
    pub conjugation: Option<ConjugationSpec>,
    /// `N_k` per factor when the base is a product of pair groupoids.
    pub pair_dims: Option<Vec<usize>>,
    /// `N` when the base is a single pair groupoid.
    pub pair_size: Option<usize>,
}

impl CategoryFile {
    pub fn involution(&self, name: &str) -> Option<usize> {
        self.involutions.iter().position(|i| i.name == name)
    }

    pub fn family(&self) -> Vec<InvolutionSpec> {
        self.involutions.iter().map(|i| i.spec.clone()).collect()
    }
}

const SECTIONS: [&str; 7] = ["meta", "identities", "maps", "comp", "involution", "builder", "conjugation"];
const MAX_NESTING: usize = 8;

struct Section {
    line: usize,
    name: String,
    args: Vec<String>,
    body: Vec<(usize, Vec<String>)>,
}

fn split_sections(text: &str, file: &str) -> Result<Vec<Section>, ParseError> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let header = line
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .filter(|s| SECTIONS.contains(&s.split_whitespace().next().unwrap_or("")));
        if let Some(h) = header {
            let mut toks = h.split_whitespace().map(String::from);
            let name = toks.next().unwrap_or_default();
            out.push(Section { line: i + 1, name, args: toks.collect(), body: Vec::new() });
        } else if let Some(s) = out.last_mut() {
            s.body.push((i + 1, line.split_whitespace().map(String::from).collect()));
        } else {
            return Err(err(file, i + 1, "content before the first section header"));
        }
    }
    Ok(out)
}

fn err(file: &str, line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { file: file.to_string(), line, message: msg.into() }
}

pub fn load_category(path: &Path) -> Result<CategoryFile, ParseError> {
    load_nested(path, 0)
}

fn load_nested(path: &Path, nesting: usize) -> Result<CategoryFile, ParseError> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| err(&file, 0, format!("cannot read: {e}")))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_nested(&text, &file, &dir, nesting)
}

/// Parses a spec; `dir` resolves the file arguments of `product`.
pub fn parse_category(text: &str, file: &str, dir: &Path) -> Result<CategoryFile, ParseError> {
    parse_nested(text, file, dir, 0)
}

fn parse_nested(text: &str, file: &str, dir: &Path, nesting: usize) -> Result<CategoryFile, ParseError> {
    let sections = split_sections(text, file)?;
    let builders: Vec<&Section> = sections.iter().filter(|s| s.name == "builder").collect();
    let has_tables = sections.iter().any(|s| matches!(s.name.as_str(), "meta" | "identities" | "maps" | "comp"));
    let mut cf = match (builders.as_slice(), has_tables) {
        ([], false) => return Err(err(file, 0, "no tables and no [builder] section")),
        ([b], false) => run_builder(b, file, dir, nesting)?,
        ([], true) => parse_tables(&sections, file)?,
        ([_, b, ..], _) => return Err(err(file, b.line, "only one [builder] section is allowed")),
        ([b, ..], true) => return Err(err(file, b.line, "give either tables or a builder, not both")),
    };
    for s in sections.iter().filter(|s| s.name == "involution") {
        let inv = parse_involution(s, &cf.base, file)?;
        if cf.involution(&inv.name).is_some() {
            return Err(err(file, s.line, format!("involution `{}` defined twice", inv.name)));
        }
        cf.involutions.push(inv);
    }
    let conj: Vec<&Section> = sections.iter().filter(|s| s.name == "conjugation").collect();
    match conj.as_slice() {
        [] => {}
        [s] => {
            if cf.conjugation.is_some() {
                return Err(err(file, s.line, "the builder already supplies conjugation data"));
            }
            cf.conjugation = Some(parse_conjugation(s, &cf, file)?);
        }
        [_, s, ..] => return Err(err(file, s.line, "only one [conjugation] section is allowed")),
    }
    Ok(cf)
}

fn name_index(base: &Base) -> HashMap<&str, CellId> {
    base.cells().map(|c| (base.cell_name(c), c)).collect()
}

fn lookup(names: &HashMap<&str, CellId>, tok: &str, file: &str, line: usize) -> Result<CellId, ParseError> {
    names.get(tok).copied().ok_or_else(|| err(file, line, format!("unknown cell `{tok}`")))
}

fn parse_tables(sections: &[Section], file: &str) -> Result<CategoryFile, ParseError> {
    let mut kind = "globular".to_string();
    let mut levels: Option<usize> = None;
    let mut names: Vec<String> = Vec::new();
    let metas: Vec<&Section> = sections.iter().filter(|s| s.name == "meta").collect();
    let meta = match metas.as_slice() {
        [m] => m,
        [] => return Err(err(file, 0, "missing [meta] section")),
        [_, m, ..] => return Err(err(file, m.line, "only one [meta] section is allowed")),
    };
    for (line, toks) in &meta.body {
        match toks[0].as_str() {
            "kind" if toks.len() == 2 && (toks[1] == "globular" || toks[1] == "fulldepth") => kind = toks[1].clone(),
            "depth" | "directions" if toks.len() == 2 => {
                levels = Some(toks[1].parse().map_err(|_| err(file, *line, "expected a number"))?)
            }
            "cells" => names.extend(toks[1..].iter().cloned()),
            _ => return Err(err(file, *line, format!("unknown meta line `{}`", toks.join(" ")))),
        }
    }
    let levels = levels.ok_or_else(|| err(file, meta.line, "meta needs `depth N` or `directions N`"))?;
    if levels == 0 {
        return Err(err(file, meta.line, "depth must be at least 1"));
    }
    if kind == "fulldepth" && levels > 8 {
        return Err(err(file, meta.line, "at most 8 directions are supported in spec files"));
    }
    let n = names.len();
    let mut ids: HashMap<&str, CellId> = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if ids.insert(name.as_str(), CellId(i)).is_some() {
            return Err(err(file, meta.line, format!("cell `{name}` listed twice")));
        }
    }
    let count = if kind == "fulldepth" { 1 << levels } else { levels };
    let key = |s: &str| if kind == "fulldepth" { subset_key(s, levels) } else { key_index(s, levels) };

    let mut tables: Vec<CompositionTable> = (0..count).map(|_| CompositionTable::empty(n)).collect();
    let mut has_maps = vec![[false; 2]; count];
    let mut mapped: Vec<[Vec<bool>; 2]> = (0..count).map(|_| [vec![false; n], vec![false; n]]).collect();
    let mut seen: BTreeMap<(usize, usize, usize), (usize, CellId)> = BTreeMap::new();
    for s in sections {
        match s.name.as_str() {
            "identities" | "comp" => {
                let [k] = s.args.as_slice() else {
                    return Err(err(file, s.line, format!("[{}] needs one key", s.name)));
                };
                let k = key(k).map_err(|m| err(file, s.line, m))?;
                for (line, toks) in &s.body {
                    if s.name == "identities" {
                        for t in toks {
                            let c = lookup(&ids, t, file, *line)?;
                            tables[k].set_identity(c, true);
                        }
                        continue;
                    }
                    let [x, y, arrow, z] = toks.as_slice() else {
                        return Err(err(file, *line, "composition lines read `x y -> z`"));
                    };
                    if arrow != "->" {
                        return Err(err(file, *line, "composition lines read `x y -> z`"));
                    }
                    let (x, y, z) = (lookup(&ids, x, file, *line)?, lookup(&ids, y, file, *line)?, lookup(&ids, z, file, *line)?);
                    if let Some((first, prev)) = seen.insert((k, x.0, y.0), (*line, z)) {
                        if prev != z {
                            return Err(err(file, *line, format!("conflicts with the composite on line {first}")));
                        }
                    }
                    tables[k].set_composition(x, y, Some(z));
                }
            }
            "maps" => {
                if !s.args.is_empty() {
                    return Err(err(file, s.line, "[maps] takes no key; lines read `s K x -> y`"));
                }
                for (line, toks) in &s.body {
                    let [which, k, x, arrow, y] = toks.as_slice() else {
                        return Err(err(file, *line, "map lines read `s K x -> y` or `t K x -> y`"));
                    };
                    let side = match which.as_str() {
                        "s" => 0,
                        "t" => 1,
                        _ => return Err(err(file, *line, "map lines start with `s` or `t`")),
                    };
                    if arrow != "->" {
                        return Err(err(file, *line, "map lines read `s K x -> y`"));
                    }
                    let k = key(k).map_err(|m| err(file, *line, m))?;
                    let (x, y) = (lookup(&ids, x, file, *line)?, lookup(&ids, y, file, *line)?);
                    if side == 0 {
                        tables[k].set_source(x, y);
                    } else {
                        tables[k].set_target(x, y);
                    }
                    has_maps[k][side] = true;
                    mapped[k][side][x.0] = true;
                }
            }
            _ => {}
        }
    }
    for k in 0..count {
        match has_maps[k] {
            [false, false] => tables[k].derive_source_target(),
            _ => {
                for side in 0..2 {
                    if let Some(x) = mapped[k][side].iter().position(|m| !m) {
                        let which = if side == 0 { "source" } else { "target" };
                        return Err(err(file, 0, format!("cell `{}` has no {which} for composition {k}", names[x])));
                    }
                }
            }
        }
    }
    let base = if kind == "fulldepth" {
        Base::FullDepth(FullDepthCategory::new(levels, names, tables).map_err(|e| err(file, 0, e.to_string()))?)
    } else {
        Base::Globular(FiniteGlobularCategory::new(names, tables).map_err(|e| err(file, 0, e.to_string()))?)
    };
    Ok(CategoryFile { base, involutions: Vec::new(), conjugation: None, pair_dims: None, pair_size: None })
}

fn parse_group(tok: &str, file: &str, line: usize) -> Result<Group, ParseError> {
    if tok == "s3" {
        return Ok(Group::symmetric3());
    }
    match tok.strip_prefix('z').and_then(|m| m.parse::<usize>().ok()) {
        Some(m) if (1..=64).contains(&m) => Ok(Group::cyclic(m)),
        _ => Err(err(file, line, format!("unknown group `{tok}`; use s3 or zM"))),
    }
}

fn run_builder(s: &Section, file: &str, dir: &Path, nesting: usize) -> Result<CategoryFile, ParseError> {
    let [(line, toks)] = s.body.as_slice() else {
        return Err(err(file, s.line, "[builder] holds exactly one line"));
    };
    let line = *line;
    let mut words: Vec<&str> = Vec::new();
    let mut want_inv = false;
    let mut want_conj = false;
    for t in toks {
        match t.as_str() {
            "+involutions" => want_inv = true,
            "+conjugation" => want_conj = true,
            w => words.push(w),
        }
    }
    let num = |t: &str| t.parse::<usize>().map_err(|_| err(file, line, format!("expected a number, got `{t}`")));
    let cat_err = |e: hicat_core::CategoryError| err(file, line, e.to_string());
    let unsupported = |what: &str| err(file, line, format!("`{}` does not provide {what}", words[0]));
    let mut cf = CategoryFile {
        base: Base::Globular(build_terminal(1).map_err(cat_err)?),
        involutions: Vec::new(),
        conjugation: None,
        pair_dims: None,
        pair_size: None,
    };
    let inverse = |g: &Group| InvolutionSpec::new((0..g.order()).map(|x| CellId(g.inverse(x))).collect(), [0]).with_hermitian(true);
    match words.as_slice() {
        ["pair_groupoid", n] => {
            let n = num(n)?;
            if n == 0 {
                return Err(err(file, line, "pair_groupoid needs N >= 1"));
            }
            cf.base = Base::Globular(build_pair_groupoid(n).map_err(cat_err)?);
            cf.pair_size = Some(n);
            if want_inv {
                let map = (0..n * n).map(|c| CellId((c % n) * n + c / n)).collect();
                cf.involutions.push(NamedInvolution { name: "inv".into(), spec: InvolutionSpec::new(map, [0]).with_hermitian(true) });
            }
        }
        ["terminal", d] => {
            cf.base = Base::Globular(build_terminal(num(d)?).map_err(cat_err)?);
        }
        ["group", g] => {
            let g = parse_group(g, file, line)?;
            cf.base = Base::Globular(catalog::group_category(&g).map_err(cat_err)?);
            if want_inv {
                cf.involutions.push(NamedInvolution { name: "inv".into(), spec: inverse(&g) });
            }
        }
        ["delooped_group", g] => {
            let g = parse_group(g, file, line)?;
            cf.base = Base::Globular(catalog::delooped_group(&g).map_err(cat_err)?);
            if want_conj {
                cf.conjugation = Some(ConjugationSpec { data: catalog::delooped_group_conjugation(&g), flags: ConjugationFlags::all() });
            }
        }
        ["codiscrete_two_group", g] => {
            let g = parse_group(g, file, line)?;
            cf.base = Base::Globular(catalog::codiscrete_two_group(&g).map_err(cat_err)?);
            if want_inv {
                let fam = catalog::codiscrete_two_group_involutions(&g);
                for (name, spec) in ["star0", "star1"].into_iter().zip(fam) {
                    cf.involutions.push(NamedInvolution { name: name.into(), spec });
                }
            }
            if want_conj {
                cf.conjugation = Some(ConjugationSpec { data: catalog::codiscrete_two_group_conjugation(&g), flags: ConjugationFlags::all() });
            }
        }
        ["abelian_two_group", g, m] => {
            let g = parse_group(g, file, line)?;
            let m = num(m)?;
            if m == 0 {
                return Err(err(file, line, "abelian_two_group needs m >= 1"));
            }
            cf.base = Base::Globular(catalog::abelian_two_group(&g, m).map_err(cat_err)?);
            if want_conj {
                cf.conjugation = Some(ConjugationSpec { data: catalog::abelian_two_group_conjugation(&g, m, 0, 0), flags: ConjugationFlags::all() });
            }
        }
        ["cyclic_delooping", m, d] => {
            let (m, d) = (num(m)?, num(d)?);
            if m == 0 {
                return Err(err(file, line, "cyclic_delooping needs m >= 1"));
            }
            cf.base = Base::Globular(catalog::cyclic_delooping(m, d).map_err(cat_err)?);
        }
        ["product", files @ ..] if !files.is_empty() => {
            if nesting >= MAX_NESTING {
                return Err(err(file, line, "product files nest too deeply"));
            }
            let mut factors = Vec::new();
            let mut dims = Some(Vec::new());
            for f in files.iter() {
                let path: PathBuf = dir.join(f);
                let sub = load_nested(&path, nesting + 1)?;
                match sub.base {
                    Base::Globular(c) if c.depth() == 1 => factors.push(c),
                    _ => return Err(err(file, line, format!("product factor `{f}` is not a 1-category"))),
                }
                match (&mut dims, sub.pair_size) {
                    (Some(d), Some(n)) => d.push(n),
                    _ => dims = None,
                }
            }
            let fdc = build_product(&factors).map_err(cat_err)?;
            if want_inv {
                let Some(d) = dims.as_ref() else {
                    return Err(err(file, line, "+involutions needs every factor to be a pair groupoid"));
                };
                for g in LevelSet::all_subsets(d.len()) {
                    let spec = product_inversion(&fdc, d, g).map_err(|e| err(file, line, e.to_string()))?;
                    // fixing the identities of every reversed composition only
                    // happens when a single direction is inverted
                    cf.involutions.push(NamedInvolution { name: format!("inv{g}"), spec: spec.with_hermitian(g.len() == 1) });
                }
            }
            cf.pair_dims = dims;
            cf.base = Base::FullDepth(fdc);
        }
        _ => return Err(err(file, line, format!("unknown builder `{}`", toks.join(" ")))),
    }
    if want_inv && cf.involutions.is_empty() {
        return Err(unsupported("involutions"));
    }
    if want_conj && cf.conjugation.is_none() {
        return Err(unsupported("conjugation data"));
    }
    Ok(cf)
}

/// Splits `a,b,{1,2},{}` at commas outside braces.
fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().filter(|t| !t.is_empty()).collect()
}

fn parse_involution(s: &Section, base: &Base, file: &str) -> Result<NamedInvolution, ParseError> {
    let Some(name) = s.args.first() else {
        return Err(err(file, s.line, "[involution NAME ...] needs a name"));
    };
    let mut contra = Vec::new();
    let mut exempt = Vec::new();
    let mut hermitian = false;
    for a in &s.args[1..] {
        if a == "hermitian" {
            hermitian = true;
        } else if let Some((k, v)) = a.split_once('=') {
            let list = match k {
                "contra" => &mut contra,
                "exempt" => &mut exempt,
                _ => return Err(err(file, s.line, format!("unknown involution option `{k}`"))),
            };
            for item in split_list(v) {
                list.push(base.composition_key(item).map_err(|m| err(file, s.line, m))?);
            }
        } else {
            return Err(err(file, s.line, format!("unknown involution option `{a}`")));
        }
    }
    let ids = name_index(base);
    let mut map: Vec<CellId> = base.cells().collect();
    for (line, toks) in &s.body {
        let [x, arrow, y] = toks.as_slice() else {
            return Err(err(file, *line, "involution lines read `x -> y`"));
        };
        if arrow != "->" {
            return Err(err(file, *line, "involution lines read `x -> y`"));
        }
        let (x, y) = (lookup(&ids, x, file, *line)?, lookup(&ids, y, file, *line)?);
        map[x.0] = y;
    }
    Ok(NamedInvolution {
        name: name.clone(),
        spec: InvolutionSpec::new(map, contra).with_exempt(exempt).with_hermitian(hermitian),
    })
}

fn parse_conjugation(s: &Section, cf: &CategoryFile, file: &str) -> Result<ConjugationSpec, ParseError> {
    let n = cf.base.cell_count();
    let mut star: Vec<CellId> = (0..n).map(CellId).collect();
    let mut flags = ConjugationFlags::default();
    for a in &s.args {
        match a.as_str() {
            "unital" => flags.unital = true,
            "involutive" => flags.involutive = true,
            "tensorial" => flags.tensorial = true,
            "traciable" => flags.traciable = true,
            "unitary" => flags.unitary = true,
            _ => match a.strip_prefix("star=") {
                Some(name) => {
                    let i = cf
                        .involution(name)
                        .ok_or_else(|| err(file, s.line, format!("unknown involution `{name}`")))?;
                    star = cf.involutions[i].spec.map.clone();
                }
                None => return Err(err(file, s.line, format!("unknown conjugation option `{a}`"))),
            },
        }
    }
    let ids = name_index(&cf.base);
    let mut conjugates = vec![None; n];
    for (line, toks) in &s.body {
        let [x, bar, r, rbar] = toks.as_slice() else {
            return Err(err(file, *line, "conjugation lines read `x xbar R Rbar`"));
        };
        let x = lookup(&ids, x, file, *line)?;
        conjugates[x.0] = Some(Conjugate {
            bar: lookup(&ids, bar, file, *line)?,
            r: lookup(&ids, r, file, *line)?,
            rbar: lookup(&ids, rbar, file, *line)?,
        });
    }
    Ok(ConjugationSpec { data: ConjugationData { star, conjugates }, flags })
}

fn key_label(base: &Base, k: usize) -> String {
    match base {
        Base::Globular(_) => k.to_string(),
        Base::FullDepth(_) => LevelSet(k as u32).to_string(),
    }
}

/// Writes a spec in table form; parsing the result gives back the same
/// category, involutions and conjugation data.
pub fn write_category(cf: &CategoryFile) -> String {
    let base = &cf.base;
    let name = |c: CellId| base.cell_name(c);
    let mut out = String::new();
    out.push_str("[meta]\n");
    match base {
        Base::Globular(c) => writeln!(out, "kind globular\ndepth {}", c.depth()).unwrap(),
        Base::FullDepth(c) => writeln!(out, "kind fulldepth\ndirections {}", c.directions()).unwrap(),
    }
    for chunk in base.names().chunks(8) {
        writeln!(out, "cells {}", chunk.join(" ")).unwrap();
    }
    for k in 0..base.composition_count() {
        let t = base.table(k);
        let ids: Vec<&str> = base.cells().filter(|&c| t.is_identity(c)).map(name).collect();
        writeln!(out, "\n[identities {}]", key_label(base, k)).unwrap();
        for chunk in ids.chunks(8) {
            writeln!(out, "{}", chunk.join(" ")).unwrap();
        }
    }
    out.push_str("\n[maps]\n");
    for k in 0..base.composition_count() {
        let t = base.table(k);
        let key = key_label(base, k);
        for c in base.cells() {
            writeln!(out, "s {key} {} -> {}", name(c), name(t.source(c))).unwrap();
            writeln!(out, "t {key} {} -> {}", name(c), name(t.target(c))).unwrap();
        }
    }
    for k in 0..base.composition_count() {
        writeln!(out, "\n[comp {}]", key_label(base, k)).unwrap();
        for (x, y, z) in base.table(k).defined() {
            writeln!(out, "{} {} -> {}", name(x), name(y), name(z)).unwrap();
        }
    }
    let list = |set: &std::collections::BTreeSet<usize>| set.iter().map(|&k| key_label(base, k)).collect::<Vec<_>>().join(",");
    let write_inv = |out: &mut String, n: &str, spec: &InvolutionSpec| {
        write!(out, "\n[involution {n}").unwrap();
        if !spec.contravariant.is_empty() {
            write!(out, " contra={}", list(&spec.contravariant)).unwrap();
        }
        if !spec.exempt.is_empty() {
            write!(out, " exempt={}", list(&spec.exempt)).unwrap();
        }
        if spec.hermitian {
            out.push_str(" hermitian");
        }
        out.push_str("]\n");
        for c in base.cells().filter(|&c| spec.apply(c) != c) {
            writeln!(out, "{} -> {}", name(c), name(spec.apply(c))).unwrap();
        }
    };
    for inv in &cf.involutions {
        write_inv(&mut out, &inv.name, &inv.spec);
    }
    if let Some(conj) = &cf.conjugation {
        let identity = conj.data.star.iter().enumerate().all(|(i, c)| c.0 == i);
        let star_name = if identity {
            None
        } else if let Some(i) = cf.involutions.iter().find(|i| i.spec.map == conj.data.star) {
            Some(i.name.clone())
        } else {
            let mut fresh = "star".to_string();
            while cf.involution(&fresh).is_some() {
                fresh.push('_');
            }
            write_inv(&mut out, &fresh, &InvolutionSpec::new(conj.data.star.clone(), [1]));
            Some(fresh)
        };
        out.push_str("\n[conjugation");
        if let Some(s) = star_name {
            write!(out, " star={s}").unwrap();
        }
        let f = conj.flags;
        for (on, word) in [(f.unital, "unital"), (f.involutive, "involutive"), (f.tensorial, "tensorial"), (f.traciable, "traciable"), (f.unitary, "unitary")] {
            if on {
                write!(out, " {word}").unwrap();
            }
        }
        out.push_str("]\n");
        for c in base.cells() {
            if let Some(j) = conj.data.conjugate(c) {
                writeln!(out, "{} {} {} {}", name(c), name(j.bar), name(j.r), name(j.rbar)).unwrap();
            }
        }
    }
    out
}
