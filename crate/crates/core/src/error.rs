use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("category has {cells} cells, above the budget of {budget}")]
    TooLarge { cells: usize, budget: usize },
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("malformed tables: {0}")]
    Shape(String),
    #[error("cell index {cell} out of range for {cells} cells")]
    CellOutOfRange { cell: usize, cells: usize },
    #[error("depth {p} out of range for a depth-{depth} category")]
    DepthOutOfRange { p: usize, depth: usize },
    #[error("cells {x} and {y} are not composable at depth {p}")]
    NotComposable { p: usize, x: usize, y: usize },
    #[error("factor {factor} has depth {depth}; products need 1-categories")]
    NotOneCategory { factor: usize, depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("involution map has {got} entries, category has {cells} cells")]
    MapLength { got: usize, cells: usize },
    #[error("involutions {a} and {b} do not commute (cell {cell})")]
    NonCommutingFamily { a: usize, b: usize, cell: usize },
    #[error("two different maps generate the variance set {variance}")]
    ConflictingFamily { variance: String },
    #[error("1-cell {cell} has no conjugate data")]
    MissingConjugate { cell: usize },
    #[error("conjugation needs a category of depth 2, got {depth}")]
    NotTwoCategory { depth: usize },
    #[error("composition index {k} out of range ({count} compositions)")]
    CompositionOutOfRange { k: usize, count: usize },
    #[error("folding of cell {cell} is undefined")]
    FoldingUndefined { cell: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvolutionError {
    #[error("composition {k} has no assigned coefficient product")]
    UnassignedProduct { k: usize },
    #[error("involution {index} has no assigned coefficient involution")]
    UnassignedVariance { index: usize },
    #[error("no covariance-preserving assignment exists; blocked at composition {composition}, involution {involution}")]
    NoAssignment { composition: usize, involution: usize },
    #[error("coefficient system has no finite matrix representation")]
    UnsupportedCoefficient,
    #[error("section has {got} entries, base has {cells} cells")]
    SectionLength { got: usize, cells: usize },
    #[error("coefficient sample is not closed under product {product}")]
    NotClosed { product: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("dimension mismatch: {0:?} vs {1:?}")]
    DimMismatch(Vec<usize>, Vec<usize>),
    #[error("hypermatrix with dims {dims:?} exceeds the entry budget of {budget}")]
    TooLarge { dims: Vec<usize>, budget: usize },
    #[error("level set {gamma} has levels beyond {levels}")]
    BadLevels { gamma: String, levels: usize },
    #[error("need at least one level with positive size")]
    EmptyDims,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("base category is not a product of pair groupoids with dims {0:?}")]
    BaseMismatch(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("matrix has non-finite entries")]
    NonFinite,
}
